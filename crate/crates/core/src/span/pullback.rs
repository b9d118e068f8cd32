//! Weak pullbacks of cospans `T --f--> B <--g-- S`.
//!
//! An object of the weak pullback is a triple `(t, s, φ)` with
//! `φ: f(t) -> g(s)` in `B`; a morphism `(t, s, φ) -> (t', s', φ')` is a pair
//! `(a: t -> t', b: s -> s')` with `f(a) ; φ' = φ ; g(b)`.
//!
//! [`weak_pullback`] builds that groupoid literally. [`weak_pullback_reduced`]
//! builds the full subgroupoid on triples whose `t` and `s` are class
//! representatives, keeping one object per isomorphism class. The two are
//! equivalent; the reduced form is what span composition uses, since the
//! literal form grows with the product of hom-set sizes.

use std::collections::HashMap;
use std::sync::Arc;

use crate::config::check_size;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidFunctor, GroupoidRef};

#[derive(Debug)]
pub struct WeakPullback {
    pub groupoid: GroupoidRef,
    /// Projection to the domain of the first functor.
    pub to_first: GroupoidFunctor,
    /// Projection to the domain of the second functor.
    pub to_second: GroupoidFunctor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PullbackMode {
    Literal,
    #[default]
    Reduced,
}

pub fn pullback_with(mode: PullbackMode, f: &GroupoidFunctor, g: &GroupoidFunctor) -> Result<WeakPullback> {
    match mode {
        PullbackMode::Literal => weak_pullback(f, g),
        PullbackMode::Reduced => weak_pullback_reduced(f, g),
    }
}

fn check_cospan(f: &GroupoidFunctor, g: &GroupoidFunctor) -> Result<()> {
    if !f.codomain().same_as(g.codomain()) {
        return Err(Error::Domain("weak pullback needs functors with a common codomain".into()));
    }
    Ok(())
}

/// `φ' = f(a)^-1 ; φ ; g(b)`: transport of `φ` along `(a, b)`.
fn transport(base: &FiniteGroupoid, f: &GroupoidFunctor, g: &GroupoidFunctor, a: usize, phi: usize, b: usize) -> usize {
    let back = base.inverse(f.morphism(a));
    base.compose_unchecked(base.compose_unchecked(back, phi), g.morphism(b))
}

/// Literal weak pullback. Objects are ordered lexicographically by
/// `(t, s, φ)`. Refuses with a size error when the object count, or the
/// morphism count, exceeds the size cap.
pub fn weak_pullback(f: &GroupoidFunctor, g: &GroupoidFunctor) -> Result<WeakPullback> {
    check_cospan(f, g)?;
    let base = f.codomain().clone();
    let (t_grp, s_grp) = (f.domain().clone(), g.domain().clone());

    let mut over: HashMap<usize, Vec<usize>> = HashMap::new();
    for s in 0..s_grp.num_objects() {
        over.entry(g.object(s)).or_default().push(s);
    }
    let projected: u128 = (0..t_grp.num_objects())
        .map(|t| {
            base.out_of(f.object(t))
                .map(|phi| over.get(&base.target(phi)).map_or(0, Vec::len) as u128)
                .sum::<u128>()
        })
        .sum();
    check_size("weak pullback objects", projected)?;

    let mut objects: Vec<(u32, u32, u32)> = Vec::with_capacity(projected as usize);
    for t in 0..t_grp.num_objects() {
        let mut here = Vec::new();
        for phi in base.out_of(f.object(t)) {
            for &s in over.get(&base.target(phi)).into_iter().flatten() {
                here.push((t as u32, s as u32, phi as u32));
            }
        }
        here.sort_unstable();
        objects.extend(here);
    }
    let index: HashMap<(u32, u32, u32), u32> =
        objects.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();

    let mor_count: u128 = objects
        .iter()
        .map(|&(t, s, _)| (t_grp.out_degree(t as usize) * s_grp.out_degree(s as usize)) as u128)
        .sum();
    check_size("weak pullback morphisms", mor_count)?;

    let mut offset = Vec::with_capacity(objects.len());
    let mut ends = Vec::with_capacity(mor_count as usize);
    let mut pair = Vec::with_capacity(mor_count as usize);
    for (o, &(t, s, phi)) in objects.iter().enumerate() {
        offset.push(ends.len());
        for a in t_grp.out_of(t as usize) {
            for b in s_grp.out_of(s as usize) {
                let phi2 = transport(&base, f, g, a, phi as usize, b);
                let key = (t_grp.target(a) as u32, s_grp.target(b) as u32, phi2 as u32);
                ends.push((o, index[&key] as usize));
                pair.push((a as u32, b as u32));
            }
        }
    }
    let locate = {
        let (t_grp, s_grp) = (t_grp.clone(), s_grp.clone());
        let offset = offset.clone();
        let objects = objects.clone();
        move |o: usize, a: usize, b: usize| {
            let s = objects[o].1 as usize;
            offset[o] + t_grp.out_position(a) * s_grp.out_degree(s) + s_grp.out_position(b)
        }
    };
    let identity: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(o, &(t, s, _))| locate(o, t_grp.identity(t as usize), s_grp.identity(s as usize)))
        .collect();
    let inverse: Vec<usize> = (0..ends.len())
        .map(|m| {
            let (a, b) = (pair[m].0 as usize, pair[m].1 as usize);
            locate(ends[m].1, t_grp.inverse(a), s_grp.inverse(b))
        })
        .collect();
    let first_map: Vec<usize> = pair.iter().map(|p| p.0 as usize).collect();
    let second_map: Vec<usize> = pair.iter().map(|p| p.1 as usize).collect();
    let rule = {
        let (t_grp, s_grp) = (t_grp.clone(), s_grp.clone());
        let sources: Vec<u32> = ends.iter().map(|e| e.0 as u32).collect();
        let pair = pair.clone();
        move |m1: usize, m2: usize| {
            let a = t_grp.compose_unchecked(pair[m1].0 as usize, pair[m2].0 as usize);
            let b = s_grp.compose_unchecked(pair[m1].1 as usize, pair[m2].1 as usize);
            locate(sources[m1] as usize, a, b)
        }
    };
    let groupoid = Arc::new(FiniteGroupoid::from_rule(objects.len(), &ends, &identity, &inverse, rule));
    let to_first = GroupoidFunctor::new_unchecked(
        groupoid.clone(),
        t_grp,
        objects.iter().map(|o| o.0 as usize).collect(),
        first_map,
    );
    let to_second = GroupoidFunctor::new_unchecked(
        groupoid.clone(),
        s_grp,
        objects.iter().map(|o| o.1 as usize).collect(),
        second_map,
    );
    Ok(WeakPullback { groupoid, to_first, to_second })
}

/// Skeletal weak pullback: one object per isomorphism class, namely the
/// triple `(t, s, φ)` with `t`, `s` class representatives and `φ` the
/// smallest morphism in its orbit under `Aut(t) × Aut(s)`. Automorphisms are
/// the stabilizing pairs `(a, b)`.
pub fn weak_pullback_reduced(f: &GroupoidFunctor, g: &GroupoidFunctor) -> Result<WeakPullback> {
    check_cospan(f, g)?;
    let base = f.codomain().clone();
    let (t_grp, s_grp) = (f.domain().clone(), g.domain().clone());
    let t_reps = &t_grp.iso_classes().representative;
    let s_reps = &s_grp.iso_classes().representative;

    let mut over: HashMap<usize, Vec<usize>> = HashMap::new();
    for &s in s_reps {
        over.entry(g.object(s)).or_default().push(s);
    }
    let projected: u128 = t_reps
        .iter()
        .map(|&t| {
            base.out_of(f.object(t))
                .map(|phi| over.get(&base.target(phi)).map_or(0, Vec::len) as u128)
                .sum::<u128>()
        })
        .sum();
    check_size("weak pullback objects", projected)?;

    let mut objects: Vec<(usize, usize)> = Vec::new();
    let mut autos: Vec<Vec<(usize, usize)>> = Vec::new();
    for &t in t_reps {
        let mut by_s: Vec<(usize, usize)> = Vec::new();
        for phi in base.out_of(f.object(t)) {
            for &s in over.get(&base.target(phi)).into_iter().flatten() {
                by_s.push((s, phi));
            }
        }
        by_s.sort_unstable();
        let aut_t: Vec<usize> = t_grp.endomorphisms(t).collect();
        let mut start = 0;
        while start < by_s.len() {
            let s = by_s[start].0;
            let end = start + by_s[start..].iter().take_while(|x| x.0 == s).count();
            let homs: Vec<usize> = by_s[start..end].iter().map(|x| x.1).collect();
            let aut_s: Vec<usize> = s_grp.endomorphisms(s).collect();
            let mut seen: HashMap<usize, ()> = HashMap::with_capacity(homs.len());
            for &phi in &homs {
                if seen.contains_key(&phi) {
                    continue;
                }
                let mut stab = Vec::new();
                for &a in &aut_t {
                    for &b in &aut_s {
                        let image = transport(&base, f, g, a, phi, b);
                        seen.insert(image, ());
                        if image == phi {
                            stab.push((a, b));
                        }
                    }
                }
                objects.push((t, s));
                autos.push(stab);
            }
            start = end;
        }
    }

    let mut ends = Vec::new();
    let mut pair = Vec::new();
    let mut lookup = HashMap::new();
    let mut identity = Vec::with_capacity(objects.len());
    for (o, stab) in autos.iter().enumerate() {
        let (t, s) = objects[o];
        for &(a, b) in stab {
            lookup.insert((o, a, b), ends.len());
            ends.push((o, o));
            pair.push((a, b));
        }
        identity.push(lookup[&(o, t_grp.identity(t), s_grp.identity(s))]);
    }
    let inverse: Vec<usize> = (0..ends.len())
        .map(|m| lookup[&(ends[m].0, t_grp.inverse(pair[m].0), s_grp.inverse(pair[m].1))])
        .collect();
    let rule = {
        let (t_grp, s_grp, pair) = (t_grp.clone(), s_grp.clone(), pair.clone());
        let sources: Vec<u32> = ends.iter().map(|e| e.0 as u32).collect();
        move |m1: usize, m2: usize| {
            let a = t_grp.compose_unchecked(pair[m1].0, pair[m2].0);
            let b = s_grp.compose_unchecked(pair[m1].1, pair[m2].1);
            lookup[&(sources[m1] as usize, a, b)]
        }
    };
    let groupoid = Arc::new(FiniteGroupoid::from_rule(objects.len(), &ends, &identity, &inverse, rule));
    let to_first = GroupoidFunctor::new_unchecked(
        groupoid.clone(),
        t_grp.clone(),
        objects.iter().map(|o| o.0).collect(),
        pair.iter().map(|p| p.0).collect(),
    );
    let to_second = GroupoidFunctor::new_unchecked(
        groupoid.clone(),
        s_grp.clone(),
        objects.iter().map(|o| o.1).collect(),
        pair.iter().map(|p| p.1).collect(),
    );
    Ok(WeakPullback { groupoid, to_first, to_second })
}
