//! The groupoid of finite sets, truncated at size `N`, and the Fock-space
//! operators built from spans over it.
//!
//! `E_{≤N}` is skeletal: object `n` is the set `{0..n}`, and its morphisms
//! are the permutations of that set in lexicographic order. Morphism
//! indices run through `S_0, S_1, …, S_N` in turn.

use std::sync::Arc;

use crate::config::check_size;
use crate::error::{Error, Result};
use crate::groupoid::{full_subgroupoid, FiniteGroupoid, GroupoidFunctor, GroupoidRef};
use crate::linalg::RationalMatrix;
use crate::perm;
use crate::rational::{factorial, recip, to_pq, Rational};
use crate::span::{
    add_spans, adjoint, compose_spans, degroupoidify_span, identity_span, scalar_mul_int, Alpha, GroupoidOverX,
    SpanOfGroupoids,
};

/// Largest truncation that is materialized.
pub const MAX_TRUNCATION: usize = 8;

#[derive(Debug, Clone)]
pub struct TruncatedE {
    pub n: usize,
    pub groupoid: GroupoidRef,
    offsets: Vec<usize>,
}

impl TruncatedE {
    /// Index of the permutation `p` of `{0..p.len()}`.
    pub fn morphism(&self, p: &[usize]) -> usize {
        self.offsets[p.len()] + perm::rank(p)
    }

    /// The permutation carried by morphism `m`.
    pub fn permutation(&self, m: usize) -> Vec<usize> {
        let n = self.groupoid.source(m);
        perm::unrank(n, m - self.offsets[n])
    }
}

/// Materializes `E_{≤N}` for `N ≤ 8`.
pub fn build_e(n: usize) -> Result<TruncatedE> {
    if n > MAX_TRUNCATION {
        return Err(Error::SizeCap { what: "truncated groupoid of finite sets", size: n as u128, cap: MAX_TRUNCATION as u64 });
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut ends = Vec::new();
    let mut perms: Vec<Vec<u8>> = Vec::new();
    for k in 0..=n {
        offsets.push(ends.len());
        for p in perm::all_permutations(k) {
            ends.push((k, k));
            perms.push(p.iter().map(|&i| i as u8).collect());
        }
    }
    check_size("truncated groupoid of finite sets", ends.len() as u128)?;
    let identity: Vec<usize> = offsets.clone();
    let index = {
        let offsets = offsets.clone();
        move |p: &[usize]| offsets[p.len()] + perm::rank(p)
    };
    let widen = |p: &[u8]| p.iter().map(|&i| i as usize).collect::<Vec<_>>();
    let inverse: Vec<usize> = perms.iter().map(|p| index(&perm::inverse(&widen(p)))).collect();
    let groupoid = Arc::new(FiniteGroupoid::from_rule(n + 1, &ends, &identity, &inverse, move |f, g| {
        let (a, b) = (&perms[f], &perms[g]);
        index(&a.iter().map(|&i| b[i as usize] as usize).collect::<Vec<_>>())
    }));
    Ok(TruncatedE { n, groupoid, offsets })
}

/// `|E_{≤N}| = Σ_{n≤N} 1/n!` from the class data alone, for any `N`.
pub fn truncated_e_cardinality(n: u64) -> Rational {
    (0..=n).map(|k| recip(factorial(k))).sum()
}

/// `Ψ_n = 1//S_n`, the one-object groupoid over `E` picking out `n`-element sets.
pub fn psi_n(n: usize, e: &TruncatedE) -> Result<GroupoidOverX> {
    if n > e.n {
        return Err(Error::Domain(format!("Ψ_{n} needs a truncation of at least {n}, have {}", e.n)));
    }
    let (_, incl) = full_subgroupoid(&e.groupoid, &[n]);
    Ok(GroupoidOverX::new(incl))
}

/// Finite sets with each element colored by one of `k` colors:
/// `⊔_n kⁿ // S_n`. Its generating function has coefficients `kⁿ/n!`.
pub fn colored_sets(k: usize, e: &TruncatedE) -> Result<GroupoidOverX> {
    // object (n, c) with c a base-k word of length n; morphism (n, c, σ)
    let words = |n: usize| k.pow(n as u32);
    let objects: u128 = (0..=e.n).map(|n| words(n) as u128).sum();
    let morphisms: u128 = (0..=e.n).map(|n| (words(n) * perm::factorial(n)) as u128).sum();
    check_size("colored sets", objects.max(morphisms))?;
    let mut obj_offset = Vec::new();
    let mut mor_offset = Vec::new();
    let (mut o, mut m) = (0, 0);
    for n in 0..=e.n {
        obj_offset.push(o);
        mor_offset.push(m);
        o += words(n);
        m += words(n) * perm::factorial(n);
    }
    let digits = move |mut c: usize, n: usize| {
        (0..n)
            .map(|_| {
                let d = c % k;
                c /= k;
                d
            })
            .collect::<Vec<_>>()
    };
    let encode = move |d: &[usize]| d.iter().rev().fold(0, |acc, &x| acc * k + x);
    // σ carries the coloring c to c' with c'[σ(i)] = c[i]
    let push = move |c: usize, p: &[usize]| {
        let d = digits(c, p.len());
        let mut out = vec![0; p.len()];
        for (i, &x) in d.iter().enumerate() {
            out[p[i]] = x;
        }
        encode(&out)
    };
    let mut ends = Vec::with_capacity(m);
    let mut inverse = Vec::with_capacity(m);
    let mut identity = Vec::with_capacity(o);
    let mut proj_obj = Vec::with_capacity(o);
    let mut proj_mor = Vec::with_capacity(m);
    let fact: Vec<usize> = (0..=e.n).map(perm::factorial).collect();
    let locate = {
        let (mor_offset, fact) = (mor_offset.clone(), fact.clone());
        move |n: usize, c: usize, r: usize| mor_offset[n] + c * fact[n] + r
    };
    for n in 0..=e.n {
        let perms = perm::all_permutations(n);
        for c in 0..words(n) {
            identity.push(locate(n, c, 0));
            proj_obj.push(n);
            for p in &perms {
                let target = push(c, p);
                ends.push((obj_offset[n] + c, obj_offset[n] + target));
                inverse.push(locate(n, target, perm::rank(&perm::inverse(p))));
                proj_mor.push(e.morphism(p));
            }
        }
    }
    let size_of: Vec<u8> = ends.iter().map(|&(src, _)| proj_obj[src] as u8).collect();
    let rule = move |f: usize, g: usize| {
        let n = size_of[f] as usize;
        let (off, fa) = (mor_offset[n], fact[n]);
        let (c, r1) = ((f - off) / fa, (f - off) % fa);
        let r2 = (g - off) % fa;
        locate(n, c, perm::rank(&perm::compose(&perm::unrank(n, r1), &perm::unrank(n, r2))))
    };
    let total = Arc::new(FiniteGroupoid::from_rule(o, &ends, &identity, &inverse, rule));
    let projection = GroupoidFunctor::new_unchecked(total, e.groupoid.clone(), proj_obj, proj_mor);
    Ok(GroupoidOverX::new(projection))
}

/// 2-colored finite sets.
pub fn two_colored_stuff(e: &TruncatedE) -> Result<GroupoidOverX> {
    colored_sets(2, e)
}

/// The functor `E_{≤N-1} -> E_{≤N}`, `S ↦ S + 1`: `σ` is extended by fixing the new point.
fn successor(from: &TruncatedE, to: &TruncatedE) -> GroupoidFunctor {
    let g = &from.groupoid;
    let objects = (0..g.num_objects()).map(|n| n + 1).collect();
    let morphisms = (0..g.num_morphisms())
        .map(|m| {
            let mut p = from.permutation(m);
            p.push(p.len());
            to.morphism(&p)
        })
        .collect();
    GroupoidFunctor::new_unchecked(g.clone(), to.groupoid.clone(), objects, morphisms)
}

/// `E_{≤N-1} -> E_{≤N}`; the morphism numbering is a prefix, so this is the identity on indices.
fn inclusion(from: &TruncatedE, to: &TruncatedE) -> GroupoidFunctor {
    let g = &from.groupoid;
    GroupoidFunctor::new_unchecked(
        g.clone(),
        to.groupoid.clone(),
        (0..g.num_objects()).collect(),
        (0..g.num_morphisms()).collect(),
    )
}

fn smaller(e: &TruncatedE) -> Result<Option<TruncatedE>> {
    if e.n == 0 {
        Ok(None)
    } else {
        build_e(e.n - 1).map(Some)
    }
}

/// `A`: apex `E_{≤N-1}`, left leg the inclusion into `E_{≤N}`, right leg `S ↦ S + 1`.
/// At α = 0 its matrix is differentiation, truncated.
pub fn annihilation_span(e: &TruncatedE) -> Result<SpanOfGroupoids> {
    match smaller(e)? {
        Some(apex) => SpanOfGroupoids::new(inclusion(&apex, e), successor(&apex, e)),
        None => {
            let empty = Arc::new(FiniteGroupoid::empty());
            let f = GroupoidFunctor::new_unchecked(empty, e.groupoid.clone(), vec![], vec![]);
            SpanOfGroupoids::new(f.clone(), f)
        }
    }
}

/// `A*`, the adjoint of [`annihilation_span`]: multiplication by `z`.
pub fn creation_span(e: &TruncatedE) -> Result<SpanOfGroupoids> {
    annihilation_span(e).map(|a| adjoint(&a))
}

/// Outcome of comparing `AA*` with `A*A + 1`.
#[derive(Debug, Clone)]
pub struct CcrReport {
    /// `AA* - A*A`.
    pub commutator: RationalMatrix,
    /// Every `(i, j, value)` where the commutator's entry `value` differs
    /// from the identity's.
    pub discrepancies: Vec<(usize, usize, Rational)>,
    pub truncation: usize,
}

impl CcrReport {
    /// The relation holds on `{0..N-1}²`.
    pub fn holds_below_truncation(&self) -> bool {
        self.discrepancies.iter().all(|&(i, j, _)| i == self.truncation || j == self.truncation)
    }
}

/// Compares the α = 0 matrices of `AA*` and `A*A` built as composite spans.
pub fn verify_ccr(e: &TruncatedE) -> Result<CcrReport> {
    let a = annihilation_span(e)?;
    let a_star = adjoint(&a);
    let zero = Alpha::integer(0);
    let aa_star = degroupoidify_span(&compose_spans(&a, &a_star)?, &zero)?;
    let a_star_a = degroupoidify_span(&compose_spans(&a_star, &a)?, &zero)?;
    let commutator = &aa_star - &a_star_a;
    let identity = RationalMatrix::identity(e.n + 1);
    let mut discrepancies = Vec::new();
    for i in 0..=e.n {
        for j in 0..=e.n {
            if commutator.get(i, j) != identity.get(i, j) {
                discrepancies.push((i, j, commutator.get(i, j).clone()));
            }
        }
    }
    Ok(CcrReport { commutator, discrepancies, truncation: e.n })
}

/// `:Φⁿ:` for `n ≤ 3`, assembled from composites of `A` and `A*` with the
/// binomial coefficients as discrete scalar groupoids. Words are read right
/// to left: `A*A` applies `A` first.
pub fn normal_ordered_power(n: usize, e: &TruncatedE) -> Result<SpanOfGroupoids> {
    let a = annihilation_span(e)?;
    let c = adjoint(&a);
    let word = |w: &[&SpanOfGroupoids]| -> Result<SpanOfGroupoids> {
        let mut it = w.iter().rev();
        let mut acc = (*it.next().unwrap()).clone();
        for s in it {
            acc = compose_spans(s, &acc)?;
        }
        Ok(acc)
    };
    let terms: Vec<(usize, Vec<&SpanOfGroupoids>)> = match n {
        0 => return Ok(identity_span(&e.groupoid)),
        1 => vec![(1, vec![&a]), (1, vec![&c])],
        2 => vec![(1, vec![&a, &a]), (2, vec![&c, &a]), (1, vec![&c, &c])],
        3 => vec![(1, vec![&a, &a, &a]), (3, vec![&c, &a, &a]), (3, vec![&c, &c, &a]), (1, vec![&c, &c, &c])],
        _ => return Err(Error::Unsupported(format!("normal-ordered power {n}; only 0 to 3 are built"))),
    };
    let mut total: Option<SpanOfGroupoids> = None;
    for (coeff, w) in terms {
        let mut term = word(&w)?;
        if coeff != 1 {
            term = scalar_mul_int(coeff, &term)?;
        }
        total = Some(match total {
            None => term,
            Some(t) => add_spans(&t, &term)?,
        });
    }
    Ok(total.expect("at least one term"))
}

/// `c₀ + c₁ z + c₂ z^2 + …`, skipping zero terms.
pub fn format_power_series(coeffs: &[Rational]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != Rational::from_integer(0.into()))
        .map(|(n, c)| match n {
            0 => to_pq(c),
            1 => format!("{} z", to_pq(c)),
            _ => format!("{} z^{n}", to_pq(c)),
        })
        .collect();
    if terms.is_empty() {
        "0/1".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::span::degroupoidify_vector;

    #[test]
    fn small_truncations() {
        let e0 = build_e(0).unwrap();
        assert_eq!(e0.groupoid.num_morphisms(), 1);
        assert_eq!(e0.groupoid.cardinality(), int(1));
        let e4 = build_e(4).unwrap();
        assert!(e4.groupoid.validate().is_valid());
        assert_eq!(e4.groupoid.iso_classes().aut_order, vec![1, 1, 2, 6, 24]);
        assert!(build_e(9).is_err());
        assert_eq!(truncated_e_cardinality(3), ratio(8, 3));
    }

    #[test]
    fn psi_vectors() {
        let e = build_e(4).unwrap();
        let v = degroupoidify_vector(&psi_n(3, &e).unwrap(), &Alpha::integer(0)).unwrap();
        assert_eq!(v, vec![int(0), int(0), int(0), ratio(1, 6), int(0)]);
        assert!(psi_n(5, &e).is_err());
    }

    #[test]
    fn colored_sets_are_valid() {
        let e = build_e(3).unwrap();
        let c = colored_sets(2, &e).unwrap();
        assert!(c.total.validate().is_valid());
        assert!(c.projection.validate().is_empty());
        let v = degroupoidify_vector(&colored_sets(3, &e).unwrap(), &Alpha::integer(0)).unwrap();
        assert_eq!(v, vec![int(1), int(3), ratio(9, 2), ratio(27, 6)]);
    }

    #[test]
    fn spans_at_truncation_zero() {
        let e = build_e(0).unwrap();
        let a = annihilation_span(&e).unwrap();
        assert_eq!(degroupoidify_span(&a, &Alpha::integer(0)).unwrap(), RationalMatrix::zeros(1, 1));
    }

    #[test]
    fn power_series_text() {
        assert_eq!(format_power_series(&[int(1), int(2), ratio(4, 3)]), "1/1 + 2/1 z + 4/3 z^2");
        assert_eq!(format_power_series(&[int(0)]), "0/1");
    }
}
