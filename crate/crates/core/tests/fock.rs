use spancalc_core::fock::*;
use spancalc_core::groupoid::coproduct;
use spancalc_core::linalg::RationalMatrix;
use spancalc_core::rational::{factorial, int, ratio, recip, to_f64, Rational};
use spancalc_core::span::*;
use spancalc_core::GroupoidFunctor;

fn mat(s: &SpanOfGroupoids) -> RationalMatrix {
    degroupoidify_span(s, &Alpha::integer(0)).unwrap()
}

/// Differentiation on polynomials of degree ≤ n, in the basis zᵏ.
fn derivative(n: usize) -> RationalMatrix {
    RationalMatrix::from_fn(n + 1, n + 1, |i, j| if j == i + 1 { int(j as i64) } else { int(0) })
}

/// Multiplication by z, dropping z^(n+1).
fn times_z(n: usize) -> RationalMatrix {
    RationalMatrix::from_fn(n + 1, n + 1, |i, j| if i == j + 1 { int(1) } else { int(0) })
}

#[test]
fn cardinality_of_truncations() {
    assert_eq!(build_e(6).unwrap().groupoid.cardinality(), ratio(1957, 720));
    assert_eq!(truncated_e_cardinality(6), ratio(1957, 720));
    let e8 = build_e(8).unwrap();
    assert_eq!(e8.groupoid.num_morphisms(), (0..=8u64).map(|k| (1..=k).product::<u64>()).sum::<u64>() as usize);
    assert_eq!(e8.groupoid.cardinality(), truncated_e_cardinality(8));
    // the tail Σ_{k>10} 1/k! lies strictly between 1/11! and 1/(10·10!)
    let gap = std::f64::consts::E - to_f64(&truncated_e_cardinality(10));
    assert!(gap > to_f64(&recip(factorial(11))));
    assert!(gap < to_f64(&recip(factorial(10) * 10)));
}

#[test]
fn small_truncations_satisfy_the_axioms() {
    for n in 0..=4 {
        assert!(build_e(n).unwrap().groupoid.validate().is_valid());
    }
}

#[test]
fn psi_inner_products() {
    let e = build_e(6).unwrap();
    for m in 0..=6 {
        for n in 0..=6 {
            let (_, c) = inner_product(&psi_n(m, &e).unwrap(), &psi_n(n, &e).unwrap()).unwrap();
            let expected = if m == n { recip(factorial(n as u64)) } else { int(0) };
            assert_eq!(c, expected, "<Ψ{m}, Ψ{n}>");
        }
    }
    let e4 = build_e(4).unwrap();
    let p2 = psi_n(2, &e4).unwrap();
    let lit = weak_pullback(&p2.projection, &p2.projection).unwrap();
    assert_eq!(lit.groupoid.cardinality(), ratio(1, 2));
}

#[test]
fn operator_matrices() {
    for n in 0..=6 {
        let e = build_e(n).unwrap();
        let a = annihilation_span(&e).unwrap();
        assert_eq!(mat(&a), derivative(n));
        assert_eq!(mat(&creation_span(&e).unwrap()), times_z(n));
        let half = Alpha::half();
        let ah = degroupoidify_span_surd(&a, &half).unwrap();
        assert_eq!(degroupoidify_span_surd(&creation_span(&e).unwrap(), &half).unwrap(), ah.transpose());
    }
}

#[test]
fn operators_on_basis_vectors() {
    let e = build_e(4).unwrap();
    let zero = Alpha::integer(0);
    let a = annihilation_span(&e).unwrap();
    let c = creation_span(&e).unwrap();
    let vec_of = |psi: &GroupoidOverX| degroupoidify_vector(psi, &zero).unwrap();
    let psi = |n| psi_n(n, &e).unwrap();
    assert_eq!(vec_of(&apply_span(&a, &psi(1)).unwrap()), vec_of(&psi(0)));
    assert_eq!(vec_of(&apply_span(&c, &psi(0)).unwrap()), vec_of(&psi(1)));
    // a(zⁿ/n!) = z^(n-1)/(n-1)!
    for n in 1..=4 {
        assert_eq!(vec_of(&apply_span(&a, &psi(n)).unwrap()), vec_of(&psi(n - 1)));
    }
}

#[test]
fn commutation_relation() {
    for n in 2..=6 {
        let report = verify_ccr(&build_e(n).unwrap()).unwrap();
        assert!(report.holds_below_truncation());
        assert_eq!(report.discrepancies, vec![(n, n, int(-(n as i64)))]);
        assert_eq!(report.commutator.block(n), RationalMatrix::identity(n));
    }
}

#[test]
fn field_operator_and_nonnegativity() {
    let e = build_e(5).unwrap();
    let a = annihilation_span(&e).unwrap();
    let c = creation_span(&e).unwrap();
    let phi = add_spans(&a, &c).unwrap();
    assert_eq!(mat(&phi), &mat(&a) + &mat(&c));
    assert_eq!(mat(&normal_ordered_power(1, &e).unwrap()), mat(&phi));
    for m in [mat(&a), mat(&c), mat(&phi)] {
        assert!(m.entries().iter().all(|x| *x >= int(0)));
    }
    assert_eq!(trace_span(&a).unwrap().1, int(0));
    assert_eq!(trace_span(&a).unwrap().0.num_objects(), 0);
}

#[test]
fn colored_generating_functions() {
    let e = build_e(6).unwrap();
    let two = two_colored_stuff(&e).unwrap();
    let v0 = degroupoidify_vector(&two, &Alpha::integer(0)).unwrap();
    let v1 = degroupoidify_vector(&two, &Alpha::integer(1)).unwrap();
    for n in 0..=6u64 {
        assert_eq!(v0[n as usize], Rational::new((1u64 << n).into(), factorial(n)));
        assert_eq!(v1[n as usize], int(1u64 << n));
    }
    assert_eq!(v0[4], ratio(2, 3));
    assert_eq!(format_power_series(&v0[..3]), "1/1 + 2/1 z + 2/1 z^2");
}

#[test]
fn generating_functions_add_over_coproducts() {
    let e = build_e(4).unwrap();
    let psi2 = psi_n(2, &e).unwrap();
    let two = two_colored_stuff(&e).unwrap();
    let sum = coproduct(&psi2.total, &two.total);
    let objects: Vec<usize> = (0..psi2.total.num_objects())
        .map(|x| psi2.projection.object(x))
        .chain((0..two.total.num_objects()).map(|x| two.projection.object(x)))
        .collect();
    let morphisms: Vec<usize> = (0..psi2.total.num_morphisms())
        .map(|m| psi2.projection.morphism(m))
        .chain((0..two.total.num_morphisms()).map(|m| two.projection.morphism(m)))
        .collect();
    let proj = GroupoidFunctor::new(sum.groupoid, e.groupoid.clone(), objects, morphisms).unwrap();
    let zero = Alpha::integer(0);
    let lhs = degroupoidify_vector(&GroupoidOverX::new(proj), &zero).unwrap();
    let u = degroupoidify_vector(&psi2, &zero).unwrap();
    let v = degroupoidify_vector(&two, &zero).unwrap();
    assert_eq!(lhs, u.iter().zip(&v).map(|(a, b)| a + b).collect::<Vec<_>>());
}

#[test]
fn normal_ordered_powers() {
    let e = build_e(6).unwrap();
    let (a, c) = (derivative(6), times_z(6));
    assert!(mat(&normal_ordered_power(0, &e).unwrap()).is_identity());
    let two = &(&(&a * &a) + &(&c * &a).scale(&int(2))) + &(&c * &c);
    assert_eq!(mat(&normal_ordered_power(2, &e).unwrap()), two);
    let three = &(&(&(&a * &a) * &a) + &(&(&c * &a) * &a).scale(&int(3)))
        + &(&(&(&c * &c) * &a).scale(&int(3)) + &(&(&c * &c) * &c));
    assert_eq!(mat(&normal_ordered_power(3, &e).unwrap()), three);
    assert!(normal_ordered_power(4, &e).is_err());
}
