use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::{FiniteGroupoid, GroupoidFunctor, GroupoidRef, NONE};
use crate::error::{Error, Result};

pub struct Coproduct {
    pub groupoid: GroupoidRef,
    pub inl: GroupoidFunctor,
    pub inr: GroupoidFunctor,
}

pub struct Product {
    pub groupoid: GroupoidRef,
    pub fst: GroupoidFunctor,
    pub snd: GroupoidFunctor,
}

/// Disjoint union: the objects and morphisms of `g` come first, then those of `h`.
pub fn coproduct(g: &GroupoidRef, h: &GroupoidRef) -> Coproduct {
    let (og, mg) = (g.num_objects(), g.num_morphisms());
    let mut ends: Vec<(usize, usize)> = (0..mg).map(|m| (g.source(m), g.target(m))).collect();
    ends.extend((0..h.num_morphisms()).map(|m| (h.source(m) + og, h.target(m) + og)));
    let mut identity: Vec<usize> = (0..og).map(|x| g.identity(x)).collect();
    identity.extend((0..h.num_objects()).map(|x| h.identity(x) + mg));
    let mut inverse: Vec<usize> = (0..mg).map(|m| g.inverse(m)).collect();
    inverse.extend((0..h.num_morphisms()).map(|m| h.inverse(m) + mg));
    let (gc, hc) = (g.clone(), h.clone());
    let sum = Arc::new(FiniteGroupoid::from_rule(
        og + h.num_objects(),
        &ends,
        &identity,
        &inverse,
        move |a, b| {
            if a < mg {
                gc.compose_unchecked(a, b)
            } else {
                hc.compose_unchecked(a - mg, b - mg) + mg
            }
        },
    ));
    let inl = GroupoidFunctor::new_unchecked(g.clone(), sum.clone(), (0..og).collect(), (0..mg).collect());
    let inr = GroupoidFunctor::new_unchecked(
        h.clone(),
        sum.clone(),
        (og..og + h.num_objects()).collect(),
        (mg..mg + h.num_morphisms()).collect(),
    );
    Coproduct { groupoid: sum, inl, inr }
}

/// Cartesian product. Object `(x, y)` has index `x * |Ob h| + y`; morphisms
/// are numbered the same way.
pub fn product(g: &GroupoidRef, h: &GroupoidRef) -> Product {
    let (oh, mh) = (h.num_objects(), h.num_morphisms());
    let mut ends = Vec::with_capacity(g.num_morphisms() * mh);
    let mut inverse = Vec::with_capacity(g.num_morphisms() * mh);
    for a in 0..g.num_morphisms() {
        for b in 0..mh {
            ends.push((g.source(a) * oh + h.source(b), g.target(a) * oh + h.target(b)));
            inverse.push(g.inverse(a) * mh + h.inverse(b));
        }
    }
    let mut identity = Vec::with_capacity(g.num_objects() * oh);
    for x in 0..g.num_objects() {
        for y in 0..oh {
            identity.push(g.identity(x) * mh + h.identity(y));
        }
    }
    let (gc, hc) = (g.clone(), h.clone());
    let prod = Arc::new(FiniteGroupoid::from_rule(
        g.num_objects() * oh,
        &ends,
        &identity,
        &inverse,
        move |f, k| gc.compose_unchecked(f / mh, k / mh) * mh + hc.compose_unchecked(f % mh, k % mh),
    ));
    let n_obj = prod.num_objects();
    let n_mor = prod.num_morphisms();
    let fst = GroupoidFunctor::new_unchecked(
        prod.clone(),
        g.clone(),
        (0..n_obj).map(|o| o / oh.max(1)).collect(),
        (0..n_mor).map(|m| m / mh.max(1)).collect(),
    );
    let snd = GroupoidFunctor::new_unchecked(
        prod.clone(),
        h.clone(),
        (0..n_obj).map(|o| o % oh.max(1)).collect(),
        (0..n_mor).map(|m| m % mh.max(1)).collect(),
    );
    Product { groupoid: prod, fst, snd }
}

/// Full subgroupoid on `objects` (kept in the given order), with its inclusion.
pub fn full_subgroupoid(g: &GroupoidRef, objects: &[usize]) -> (GroupoidRef, GroupoidFunctor) {
    let mut local = vec![NONE; g.num_objects()];
    for (i, &x) in objects.iter().enumerate() {
        local[x] = i as u32;
    }
    let mut morphisms = Vec::new();
    for &x in objects {
        for m in g.out_of(x) {
            if local[g.target(m)] != NONE {
                morphisms.push(m);
            }
        }
    }
    morphisms.sort_unstable();
    let mut back = vec![NONE; g.num_morphisms()];
    for (i, &m) in morphisms.iter().enumerate() {
        back[m] = i as u32;
    }
    let ends: Vec<_> = morphisms
        .iter()
        .map(|&m| (local[g.source(m)] as usize, local[g.target(m)] as usize))
        .collect();
    let identity: Vec<_> = objects.iter().map(|&x| back[g.identity(x)] as usize).collect();
    let inverse: Vec<_> = morphisms.iter().map(|&m| back[g.inverse(m)] as usize).collect();
    let parent = g.clone();
    let mor = morphisms.clone();
    let sub = Arc::new(FiniteGroupoid::from_rule(
        objects.len(),
        &ends,
        &identity,
        &inverse,
        move |a, b| back[parent.compose_unchecked(mor[a], mor[b])] as usize,
    ));
    let incl = GroupoidFunctor::new_unchecked(sub.clone(), g.clone(), objects.to_vec(), morphisms);
    (sub, incl)
}

/// The full subgroupoid of the domain of `v` on objects sent into the
/// isomorphism class of `x`, with its inclusion.
pub fn full_inverse_image(v: &GroupoidFunctor, x: usize) -> Result<(GroupoidRef, GroupoidFunctor)> {
    let base = v.codomain();
    if x >= base.num_objects() {
        return Err(Error::Domain(format!(
            "object {x} is not in a groupoid with {} objects",
            base.num_objects()
        )));
    }
    let classes = base.iso_classes();
    let target = classes.class_of[x];
    let dom = v.domain();
    let objects: Vec<usize> = (0..dom.num_objects())
        .filter(|&a| classes.class_of[v.object(a)] == target)
        .collect();
    Ok(full_subgroupoid(dom, &objects))
}

/// One object per isomorphism class (the class representatives), with the
/// inclusion into `g`. The inclusion is always an equivalence.
pub fn skeleton(g: &GroupoidRef) -> (GroupoidRef, GroupoidFunctor) {
    let reps = g.iso_classes().representative.clone();
    full_subgroupoid(g, &reps)
}

/// A weak inverse to a skeleton inclusion: every object goes to its class
/// representative and a morphism `m: x -> y` goes to `i_x ; m ; i_y^-1`,
/// where `i_x: rep -> x` are fixed along a spanning tree of each class.
pub fn skeleton_retraction(g: &GroupoidRef, inclusion: &GroupoidFunctor) -> Result<GroupoidFunctor> {
    if !inclusion.codomain().same_as(g) {
        return Err(Error::Domain("inclusion does not land in the given groupoid".into()));
    }
    let skel = inclusion.domain().clone();
    let classes = g.iso_classes();
    let mut skel_object = vec![NONE; g.num_objects()];
    for s in 0..skel.num_objects() {
        skel_object[inclusion.object(s)] = s as u32;
    }
    let mut back = HashMap::new();
    for m in 0..skel.num_morphisms() {
        back.insert(inclusion.morphism(m), m);
    }
    let mut to_obj = vec![NONE; g.num_objects()];
    let mut path = vec![NONE; g.num_objects()];
    for (c, &rep) in classes.representative.iter().enumerate() {
        let s = skel_object[rep];
        if s == NONE {
            return Err(Error::Domain(format!("class {c} has no object in the skeleton")));
        }
        path[rep] = g.identity(rep) as u32;
        let mut queue = VecDeque::from([rep]);
        while let Some(x) = queue.pop_front() {
            to_obj[x] = s;
            for m in g.out_of(x) {
                let y = g.target(m);
                if path[y] == NONE {
                    path[y] = g.compose_unchecked(path[x] as usize, m) as u32;
                    queue.push_back(y);
                }
            }
        }
    }
    let mut morphism_map = Vec::with_capacity(g.num_morphisms());
    for m in 0..g.num_morphisms() {
        let (x, y) = (g.source(m), g.target(m));
        let via = g.compose_unchecked(path[x] as usize, m);
        let endo = g.compose_unchecked(via, g.inverse(path[y] as usize));
        let image = *back
            .get(&endo)
            .ok_or_else(|| Error::Domain("skeleton is missing an automorphism".into()))?;
        morphism_map.push(image);
    }
    Ok(GroupoidFunctor::new_unchecked(
        g.clone(),
        skel,
        to_obj.into_iter().map(|s| s as usize).collect(),
        morphism_map,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub faithful: bool,
    pub full: bool,
    pub essentially_surjective: bool,
}

impl EquivalenceReport {
    pub fn is_equivalence(&self) -> bool {
        self.faithful && self.full && self.essentially_surjective
    }
}

pub fn equivalence_report(f: &GroupoidFunctor) -> EquivalenceReport {
    let (d, c) = (f.domain(), f.codomain());
    let dc = d.iso_classes();
    let cc = c.iso_classes();

    let mut images: HashMap<(usize, usize), HashSet<usize>> = HashMap::new();
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    for m in 0..d.num_morphisms() {
        let key = (d.source(m), d.target(m));
        images.entry(key).or_default().insert(f.morphism(m));
        *counts.entry(key).or_default() += 1;
    }
    let faithful = images.iter().all(|(k, set)| set.len() == counts[k]);
    let hom_onto = images
        .iter()
        .all(|(&(a, b), set)| set.len() == c.hom(f.object(a), f.object(b)).count());
    // no new isomorphisms between objects that were not isomorphic
    let hit: Vec<usize> = dc.representative.iter().map(|&r| cc.class_of[f.object(r)]).collect();
    let distinct: HashSet<usize> = hit.iter().copied().collect();
    let class_injective = distinct.len() == hit.len();
    let essentially_surjective = distinct.len() == cc.num_classes();
    EquivalenceReport { faithful, full: hom_onto && class_injective, essentially_surjective }
}

/// True iff `f` is full, faithful and essentially surjective.
pub fn check_equivalence_certificate(f: &GroupoidFunctor) -> bool {
    equivalence_report(f).is_equivalence()
}
