use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spancalc_core::action::FiniteGroup;
use spancalc_core::groupoid::{product, FiniteGroupoid, GroupoidFunctor, GroupoidRef};
use spancalc_core::linalg::RationalMatrix;
use spancalc_core::random::{random_functor, random_groupoid, random_over, random_span, BlockGroupoid};
use spancalc_core::rational::{int, pow_i, ratio, recip, Rational};
use spancalc_core::span::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix entries summed over every apex object with weight `1/|Mor(s, -)|`
/// instead of over classes.
fn matrix_oracle(s: &SpanOfGroupoids, alpha: i64) -> RationalMatrix {
    let (x, y) = (s.source(), s.target());
    let (xc, yc) = (x.iso_classes(), y.iso_classes());
    let mut m = RationalMatrix::zeros(yc.num_classes(), xc.num_classes());
    for a in 0..s.apex.num_objects() {
        let (cx, cy) = (xc.class_of[s.right.object(a)], yc.class_of[s.left.object(a)]);
        let w = pow_i(&int(xc.aut_order[cx]), 1 - alpha) * pow_i(&int(yc.aut_order[cy]), alpha);
        m.add_at(cy, cx, &(w * recip(s.apex.out_degree(a) as u64)));
    }
    m
}

fn vector_oracle(psi: &GroupoidOverX, alpha: i64) -> Vec<Rational> {
    let xc = psi.base().iso_classes();
    let mut v = vec![int(0); xc.num_classes()];
    for a in 0..psi.total.num_objects() {
        let c = xc.class_of[psi.projection.object(a)];
        v[c] += pow_i(&int(xc.aut_order[c]), alpha) * recip(psi.total.out_degree(a) as u64);
    }
    v
}

fn mat(s: &SpanOfGroupoids, alpha: i64) -> RationalMatrix {
    degroupoidify_span(s, &Alpha::integer(alpha)).unwrap()
}

fn one_object(g: FiniteGroup) -> GroupoidRef {
    Arc::new(FiniteGroupoid::from_group(&g))
}

#[test]
fn pullback_of_identities_on_z2() {
    // (t, s, φ) for φ in Z/2; (id, g) carries φ to φ·g, so both objects are
    // isomorphic and the pullback is equivalent to Z/2 itself
    let x = one_object(FiniteGroup::cyclic(2));
    let id = GroupoidFunctor::identity(&x);
    let p = weak_pullback(&id, &id).unwrap();
    assert_eq!(p.groupoid.num_objects(), 2);
    assert_eq!(p.groupoid.num_morphisms(), 8);
    assert!(p.groupoid.validate().is_valid());
    assert_eq!(p.groupoid.cardinality(), ratio(1, 2));
    assert_eq!(weak_pullback_reduced(&id, &id).unwrap().groupoid.cardinality(), ratio(1, 2));
}

#[test]
fn pullback_over_terminal_is_product() {
    let mut r = rng(1);
    for _ in 0..10 {
        let a = random_groupoid(&mut r, 3).groupoid;
        let b = random_groupoid(&mut r, 3).groupoid;
        let p = weak_pullback(&GroupoidFunctor::to_terminal(&a), &GroupoidFunctor::to_terminal(&b)).unwrap();
        assert_eq!(p.groupoid.num_objects(), a.num_objects() * b.num_objects());
        assert_eq!(p.groupoid.cardinality(), product(&a, &b).groupoid.cardinality());
        assert_eq!(p.groupoid.cardinality(), a.cardinality() * b.cardinality());
    }
}

#[test]
fn mismatched_codomains_are_rejected() {
    let a = Arc::new(FiniteGroupoid::discrete(2));
    let b = Arc::new(FiniteGroupoid::discrete(3));
    assert!(weak_pullback(&GroupoidFunctor::identity(&a), &GroupoidFunctor::identity(&b)).is_err());
    assert!(compose_spans(&identity_span(&a), &identity_span(&b)).is_err());
    assert!(add_spans(&identity_span(&a), &identity_span(&b)).is_err());
}

#[test]
fn sets_compose_like_count_matrices() {
    // spans of finite sets: S ⊆ X × Y given by multiplicity tables
    let counts_s = [[1usize, 0, 2], [0, 1, 1]]; // 2×3: Y rows, X cols
    let counts_t = [[2usize, 1], [1, 0], [0, 3], [1, 1]]; // 4×2
    let x = Arc::new(FiniteGroupoid::discrete(3));
    let y = Arc::new(FiniteGroupoid::discrete(2));
    let z = Arc::new(FiniteGroupoid::discrete(4));
    let build = |counts: &[Vec<usize>], src: &GroupoidRef, tgt: &GroupoidRef| {
        let mut legs = Vec::new();
        for (i, row) in counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                legs.extend(std::iter::repeat((i, j)).take(c));
            }
        }
        let apex = Arc::new(FiniteGroupoid::discrete(legs.len()));
        let n = legs.len();
        let left = GroupoidFunctor::new(apex.clone(), tgt.clone(), legs.iter().map(|l| l.0).collect(), legs.iter().map(|l| l.0).collect()).unwrap();
        let right = GroupoidFunctor::new(apex, src.clone(), legs.iter().map(|l| l.1).collect(), legs.iter().map(|l| l.1).collect()).unwrap();
        assert_eq!(left.domain().num_objects(), n);
        SpanOfGroupoids::new(left, right).unwrap()
    };
    let s = build(&counts_s.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), &x, &y);
    let t = build(&counts_t.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), &y, &z);
    let ts = compose_spans(&t, &s).unwrap();
    for i in 0..4 {
        for j in 0..3 {
            let expected: usize = (0..2).map(|k| counts_t[i][k] * counts_s[k][j]).sum();
            assert_eq!(mat(&ts, 0).get(i, j), &int(expected as i64));
        }
    }
    let paths: usize = (0..2).map(|k| (0..4).map(|i| counts_t[i][k]).sum::<usize>() * counts_s[k].iter().sum::<usize>()).sum();
    assert_eq!(ts.apex.num_objects(), paths);
}

#[test]
fn scalars() {
    let mut r = rng(2);
    let x = random_groupoid(&mut r, 3);
    let s = random_span(&mut r, &x, &x, 3);
    let two = Arc::new(FiniteGroupoid::discrete(2));
    let z2 = one_object(FiniteGroup::cyclic(2));
    let term = Arc::new(FiniteGroupoid::terminal());
    assert_eq!(mat(&scalar_mul(&term, &s).unwrap(), 0), mat(&s, 0));
    assert_eq!(mat(&scalar_mul(&two, &s).unwrap(), 0), mat(&s, 0).scale(&int(2)));
    assert_eq!(mat(&scalar_mul(&z2, &s).unwrap(), 1), mat(&s, 1).scale(&ratio(1, 2)));
    assert_eq!(mat(&scalar_mul_int(3, &s).unwrap(), 1), mat(&s, 1).scale(&int(3)));
}

#[test]
fn identity_spans() {
    let term = Arc::new(FiniteGroupoid::terminal());
    assert!(mat(&identity_span(&term), 0).is_identity());
    let mut r = rng(3);
    for _ in 0..10 {
        let x = random_groupoid(&mut r, 4);
        let id = identity_span(&x.groupoid);
        for a in [-1, 0, 1, 2] {
            assert!(mat(&id, a).is_identity());
        }
        assert!(degroupoidify_span_surd(&id, &Alpha::half()).unwrap().to_rational().unwrap().is_identity());
        let s = random_span(&mut r, &x, &x, 3);
        assert_eq!(mat(&compose_spans(&id, &s).unwrap(), 0), mat(&s, 0));
        assert_eq!(mat(&compose_spans(&s, &id).unwrap(), 1), mat(&s, 1));
    }
}

#[test]
fn adjoint_is_an_involution_and_transposes_at_one_half() {
    let mut r = rng(4);
    for _ in 0..10 {
        let x = random_groupoid(&mut r, 3);
        let y = random_groupoid(&mut r, 3);
        let s = random_span(&mut r, &x, &y, 3);
        let back = adjoint(&adjoint(&s));
        assert_eq!(mat(&back, 0), mat(&s, 0));
        let half = Alpha::half();
        assert_eq!(
            degroupoidify_span_surd(&adjoint(&s), &half).unwrap(),
            degroupoidify_span_surd(&s, &half).unwrap().transpose()
        );
    }
}

#[test]
fn tensor_with_terminal_identity() {
    let mut r = rng(5);
    let x = random_groupoid(&mut r, 3);
    let y = random_groupoid(&mut r, 3);
    let s = random_span(&mut r, &x, &y, 3);
    let one = identity_span(&Arc::new(FiniteGroupoid::terminal()));
    assert_eq!(mat(&tensor_spans(&s, &one), 0), mat(&s, 0));
    assert_eq!(mat(&tensor_spans(&one, &s), 1), mat(&s, 1));
}

#[test]
fn surd_entries_at_one_half() {
    // Z/2 -> terminal: entry |Aut x|^(1/2) |Aut y|^(1/2) / |Aut s| = √2/2
    let z2 = one_object(FiniteGroup::cyclic(2));
    let left = GroupoidFunctor::to_terminal(&z2);
    let s = SpanOfGroupoids::new(left, GroupoidFunctor::identity(&z2)).unwrap();
    let m = degroupoidify_span_surd(&s, &Alpha::half()).unwrap();
    assert_eq!(m.get(0, 0).to_string(), "1/2*sqrt(2)");
    assert!(degroupoidify_span(&s, &Alpha::half()).is_err());
    assert!(degroupoidify_span(&s, &Alpha::parse("1/3").unwrap()).is_err());
}

#[test]
fn vectors_of_identity_and_over_discrete() {
    let mut r = rng(6);
    let x = random_groupoid(&mut r, 4);
    let v = degroupoidify_vector(&GroupoidOverX::identity(&x.groupoid), &Alpha::integer(0)).unwrap();
    let aut = &x.groupoid.iso_classes().aut_order;
    assert_eq!(v, aut.iter().map(|&a| recip(a)).collect::<Vec<_>>());
    let v1 = degroupoidify_vector(&GroupoidOverX::identity(&x.groupoid), &Alpha::integer(1)).unwrap();
    assert!(v1.iter().all(|e| *e == int(1)));
}

#[test]
fn literal_pullback_is_a_valid_groupoid() {
    let mut r = rng(8);
    let mut checked = 0;
    while checked < 10 {
        let b = random_groupoid(&mut r, 2);
        let t = random_groupoid(&mut r, 2);
        let s = random_groupoid(&mut r, 2);
        let f = random_functor(&mut r, &t, &b);
        let g = random_functor(&mut r, &s, &b);
        let lit = weak_pullback(&f, &g).unwrap();
        // full validation is cubic in the morphism count
        if lit.groupoid.num_morphisms() > 1500 {
            continue;
        }
        checked += 1;
        assert!(lit.groupoid.validate().is_valid());
        assert!(lit.to_first.validate().is_empty());
        assert!(lit.to_second.validate().is_empty());
        let red = weak_pullback_reduced(&f, &g).unwrap();
        assert!(red.groupoid.validate().is_valid());
        assert!(red.to_first.validate().is_empty());
        assert_eq!(red.groupoid.num_objects(), lit.groupoid.iso_classes().num_classes());
        assert_eq!(red.groupoid.cardinality(), lit.groupoid.cardinality());
        assert_eq!(lit.groupoid.cardinality(), lit.groupoid.cardinality_alt());
    }
}

#[test]
fn trace_of_identity_counts_classes() {
    let mut r = rng(9);
    for _ in 0..10 {
        let x = random_groupoid(&mut r, 4);
        let (_, card) = trace_span(&identity_span(&x.groupoid)).unwrap();
        assert_eq!(card, int(x.groupoid.iso_classes().num_classes() as i64));
    }
}

#[test]
fn inner_product_against_itself() {
    let mut r = rng(10);
    let x = random_groupoid(&mut r, 3);
    let id = GroupoidOverX::identity(&x.groupoid);
    let (_, c) = inner_product(&id, &id).unwrap();
    assert_eq!(c, x.groupoid.cardinality());
}

fn small(seed: u64) -> (ChaCha8Rng, BlockGroupoid, BlockGroupoid, BlockGroupoid) {
    let mut r = rng(seed);
    let x = random_groupoid(&mut r, 3);
    let y = random_groupoid(&mut r, 3);
    let z = random_groupoid(&mut r, 3);
    (r, x, y, z)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matrix_matches_object_sum_oracle(seed in any::<u64>()) {
        let (mut r, x, y, _) = small(seed);
        let s = random_span(&mut r, &x, &y, 3);
        for a in [-1, 0, 1, 2] {
            prop_assert_eq!(mat(&s, a), matrix_oracle(&s, a));
        }
    }

    #[test]
    fn matrix_matches_pullback_path(seed in any::<u64>()) {
        let (mut r, x, y, _) = small(seed);
        let s = random_span(&mut r, &x, &y, 3);
        for a in [0, 1] {
            prop_assert_eq!(degroupoidify_span_via_pullback(&s, &Alpha::integer(a)).unwrap(), mat(&s, a));
        }
    }

    #[test]
    fn composition_is_functorial(seed in any::<u64>()) {
        let (mut r, x, y, z) = small(seed);
        let s = random_span(&mut r, &x, &y, 3);
        let t = random_span(&mut r, &y, &z, 3);
        let ts = compose_spans(&t, &s).unwrap();
        let lit = compose_spans_literal(&t, &s).unwrap();
        for a in [0, 1] {
            let product = &mat(&t, a) * &mat(&s, a);
            prop_assert_eq!(&mat(&ts, a), &product);
            prop_assert_eq!(&mat(&lit, a), &product);
        }
    }

    #[test]
    fn sums_and_tensors(seed in any::<u64>()) {
        let (mut r, x, y, z) = small(seed);
        let s = random_span(&mut r, &x, &y, 3);
        let t = random_span(&mut r, &x, &y, 3);
        let u = random_span(&mut r, &z, &x, 2);
        for a in [0, 1] {
            prop_assert_eq!(mat(&add_spans(&s, &t).unwrap(), a), &mat(&s, a) + &mat(&t, a));
            prop_assert_eq!(mat(&tensor_spans(&s, &u), a), mat(&s, a).kron(&mat(&u, a)));
        }
    }

    #[test]
    fn vectors_follow_matrices(seed in any::<u64>()) {
        let (mut r, x, y, _) = small(seed);
        let s = random_span(&mut r, &x, &y, 3);
        let psi = random_over(&mut r, &x, 3);
        for a in [0, 1] {
            let alpha = Alpha::integer(a);
            let v = degroupoidify_vector(&psi, &alpha).unwrap();
            prop_assert_eq!(&v, &vector_oracle(&psi, a));
            let sv = degroupoidify_vector(&apply_span(&s, &psi).unwrap(), &alpha).unwrap();
            prop_assert_eq!(&sv, &mat(&s, a).mul_vec(&v));
            let lit = apply_span_with(PullbackMode::Literal, &s, &psi).unwrap();
            prop_assert_eq!(&degroupoidify_vector(&lit, &alpha).unwrap(), &sv);
        }
    }

    #[test]
    fn alpha_change_of_basis(seed in any::<u64>()) {
        let (mut r, x, y, _) = small(seed);
        let s = random_span(&mut r, &x, &y, 3);
        let diag = |g: &GroupoidRef, e: i64| {
            let d: Vec<Rational> = g.iso_classes().aut_order.iter().map(|&a| pow_i(&int(a), e)).collect();
            RationalMatrix::diagonal(&d)
        };
        for (a, b) in [(0, 1), (1, 0), (2, -1), (0, 0)] {
            // vectors transform as v_b = |Aut|^(b-a) v_a
            let lhs = &diag(s.target(), b - a) * &mat(&s, a);
            let rhs = &mat(&s, b) * &diag(s.source(), b - a);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn adjoint_transposes_complementary_alpha(seed in any::<u64>()) {
        let (mut r, x, y, z) = small(seed);
        let s = random_span(&mut r, &x, &y, 3);
        let t = random_span(&mut r, &y, &z, 3);
        for a in [0, 1] {
            prop_assert_eq!(mat(&adjoint(&s), a), mat(&s, 1 - a).transpose());
        }
        let lhs = mat(&adjoint(&compose_spans(&t, &s).unwrap()), 0);
        let rhs = mat(&compose_spans(&adjoint(&s), &adjoint(&t)).unwrap(), 0);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inner_products(seed in any::<u64>()) {
        let (mut r, x, y, _) = small(seed);
        let phi = random_over(&mut r, &y, 3);
        let psi = random_over(&mut r, &x, 3);
        let psi2 = random_over(&mut r, &x, 3);
        let s = random_span(&mut r, &x, &y, 3);
        let (_, c) = inner_product(&psi, &psi2).unwrap();
        prop_assert_eq!(&c, &inner_product(&psi2, &psi).unwrap().1);
        prop_assert_eq!(&c, &inner_product_formula(&psi, &psi2).unwrap());
        let lhs = inner_product(&phi, &apply_span(&s, &psi).unwrap()).unwrap().1;
        let rhs = inner_product(&apply_span(&adjoint(&s), &phi).unwrap(), &psi).unwrap().1;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn traces(seed in any::<u64>()) {
        let (mut r, x, y, _) = small(seed);
        let s = random_span(&mut r, &x, &x, 3);
        let s2 = random_span(&mut r, &x, &x, 3);
        let t = random_span(&mut r, &x, &y, 3);
        let u = random_span(&mut r, &y, &x, 3);
        let (g, c) = trace_span(&s).unwrap();
        prop_assert!(g.validate().is_valid());
        prop_assert_eq!(&c, &mat(&s, 0).trace());
        prop_assert_eq!(&c, &mat(&s, 1).trace());
        let lit = trace_groupoid_literal(&s).unwrap();
        prop_assert!(lit.validate().is_valid());
        prop_assert_eq!(&lit.cardinality(), &c);
        let tu = trace_span(&compose_spans(&t, &u).unwrap()).unwrap().1;
        let ut = trace_span(&compose_spans(&u, &t).unwrap()).unwrap().1;
        prop_assert_eq!(tu, ut);
        let sum = trace_span(&add_spans(&s, &s2).unwrap()).unwrap().1;
        prop_assert_eq!(sum, &c + trace_span(&s2).unwrap().1);
        let z3 = one_object(FiniteGroup::cyclic(3));
        let scaled = trace_span(&scalar_mul(&z3, &s).unwrap()).unwrap().1;
        prop_assert_eq!(scaled, c * ratio(1, 3));
    }
}
