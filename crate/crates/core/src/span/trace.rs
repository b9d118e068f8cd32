//! Inner products of groupoids over `X` and traces of spans.

use std::collections::HashMap;
use std::sync::Arc;

use crate::config::check_size;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidRef};
use crate::rational::{int, Rational};

use super::{degroupoidify_vector, weak_pullback_reduced, Alpha, GroupoidOverX, SpanOfGroupoids};

/// `⟨φ, ψ⟩`: the weak pullback of the two projections (in skeletal form)
/// and its cardinality.
pub fn inner_product(phi: &GroupoidOverX, psi: &GroupoidOverX) -> Result<(GroupoidRef, Rational)> {
    let p = weak_pullback_reduced(&phi.projection, &psi.projection)?;
    let card = p.groupoid.cardinality();
    Ok((p.groupoid, card))
}

/// `Σ_[x] |Aut x| φ̃[x] ψ̃[x]` on the α = 0 vectors.
pub fn inner_product_formula(phi: &GroupoidOverX, psi: &GroupoidOverX) -> Result<Rational> {
    if !phi.base().same_as(psi.base()) {
        return Err(Error::Domain("groupoids lie over different bases".into()));
    }
    let zero = Alpha::integer(0);
    let (u, v) = (degroupoidify_vector(phi, &zero)?, degroupoidify_vector(psi, &zero)?);
    let aut = &phi.base().iso_classes().aut_order;
    Ok(u.iter().zip(&v).zip(aut).map(|((a, b), &n)| a * b * int(n)).sum())
}

fn check_endo(s: &SpanOfGroupoids) -> Result<()> {
    if !s.source().same_as(s.target()) {
        return Err(Error::Domain("trace needs a span from a groupoid to itself".into()));
    }
    Ok(())
}

/// `μ' = p(h)^-1 ; μ ; q(h)`.
fn conjugate(s: &SpanOfGroupoids, h: usize, mu: usize) -> usize {
    let x = s.source();
    let back = x.inverse(s.right.morphism(h));
    x.compose_unchecked(x.compose_unchecked(back, mu), s.left.morphism(h))
}

/// The trace groupoid in skeletal form and its cardinality. Objects are
/// pairs `(a, μ: p(a) -> q(a))` up to isomorphism, with `a` a class
/// representative of the apex and `μ` the least element of its orbit under
/// `Aut(a)`; automorphisms are the `h` in `Aut(a)` fixing `μ`.
pub fn trace_span(s: &SpanOfGroupoids) -> Result<(GroupoidRef, Rational)> {
    check_endo(s)?;
    let (apex, x) = (&s.apex, s.source());
    let mut objects = Vec::new();
    let mut ends = Vec::new();
    let mut apex_mor = Vec::new();
    let mut identity = Vec::new();
    let mut lookup = HashMap::new();
    for &a in &apex.iso_classes().representative {
        let auts: Vec<usize> = apex.endomorphisms(a).collect();
        let mut seen = std::collections::HashSet::new();
        for mu in x.hom(s.right.object(a), s.left.object(a)) {
            if !seen.insert(mu) {
                continue;
            }
            let o = objects.len();
            objects.push(mu);
            for &h in &auts {
                let image = conjugate(s, h, mu);
                seen.insert(image);
                if image == mu {
                    lookup.insert((o, h), ends.len());
                    ends.push((o, o));
                    apex_mor.push(h);
                }
            }
            identity.push(lookup[&(o, apex.identity(a))]);
        }
    }
    let inverse: Vec<usize> = (0..ends.len()).map(|m| lookup[&(ends[m].0, apex.inverse(apex_mor[m]))]).collect();
    let apex2 = apex.clone();
    let sources: Vec<usize> = ends.iter().map(|e| e.0).collect();
    let g = Arc::new(FiniteGroupoid::from_rule(objects.len(), &ends, &identity, &inverse, move |f, k| {
        lookup[&(sources[f], apex2.compose_unchecked(apex_mor[f], apex_mor[k]))]
    }));
    let card = g.cardinality();
    Ok((g, card))
}

/// The trace groupoid on every pair `(a, μ)`, with a morphism
/// `(a, μ) -> (a', μ')` for each `h: a -> a'` satisfying `μ ; q(h) = p(h) ; μ'`.
pub fn trace_groupoid_literal(s: &SpanOfGroupoids) -> Result<GroupoidRef> {
    check_endo(s)?;
    let (apex, x) = (&s.apex, s.source());
    let homs = |a: usize| x.hom(s.right.object(a), s.left.object(a));
    let n_obj: u128 = (0..apex.num_objects()).map(|a| homs(a).count() as u128).sum();
    check_size("trace groupoid objects", n_obj)?;
    let n_mor: u128 = (0..apex.num_objects()).map(|a| (homs(a).count() * apex.out_degree(a)) as u128).sum();
    check_size("trace groupoid morphisms", n_mor)?;

    let mut objects = Vec::new();
    let mut index = HashMap::new();
    for a in 0..apex.num_objects() {
        for mu in homs(a) {
            index.insert((a, mu), objects.len());
            objects.push((a, mu));
        }
    }
    // morphism (o, h) has index offset[o] + position of h among out_of(a)
    let mut offset = Vec::with_capacity(objects.len());
    let mut ends = Vec::new();
    let mut apex_mor = Vec::new();
    for (o, &(a, mu)) in objects.iter().enumerate() {
        offset.push(ends.len());
        for h in apex.out_of(a) {
            ends.push((o, index[&(apex.target(h), conjugate(s, h, mu))]));
            apex_mor.push(h);
        }
    }
    let locate = {
        let apex = apex.clone();
        let offset = offset.clone();
        move |o: usize, h: usize| offset[o] + apex.out_position(h)
    };
    let identity: Vec<usize> = objects.iter().enumerate().map(|(o, &(a, _))| locate(o, apex.identity(a))).collect();
    let inverse: Vec<usize> =
        (0..ends.len()).map(|m| locate(ends[m].1, apex.inverse(apex_mor[m]))).collect();
    let apex2 = apex.clone();
    let sources: Vec<usize> = ends.iter().map(|e| e.0).collect();
    Ok(Arc::new(FiniteGroupoid::from_rule(objects.len(), &ends, &identity, &inverse, move |f, k| {
        locate(sources[f], apex2.compose_unchecked(apex_mor[f], apex_mor[k]))
    })))
}
