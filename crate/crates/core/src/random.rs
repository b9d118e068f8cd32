//! Random small groupoids, functors and spans for property tests and benchmarks.
//!
//! Every generated groupoid is a disjoint union of blocks; a block is a
//! codiscrete groupoid on `n` objects times a small group `G`, so each block
//! is one iso class with automorphism group `G`. Functors between such
//! groupoids send a block to a block through a group homomorphism twisted by
//! a choice of element per object, which makes them non-full and
//! non-faithful in general.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::FiniteGroup;
use crate::groupoid::{FiniteGroupoid, GroupoidFunctor, GroupoidRef};
use crate::span::{GroupoidOverX, SpanOfGroupoids};

#[derive(Debug, Clone)]
pub struct Block {
    pub objects: usize,
    pub group: Arc<FiniteGroup>,
    obj_offset: usize,
    mor_offset: usize,
}

/// A groupoid together with the block structure it was built from.
#[derive(Debug, Clone)]
pub struct BlockGroupoid {
    pub groupoid: GroupoidRef,
    pub blocks: Vec<Block>,
}

impl BlockGroupoid {
    /// Builds the groupoid with blocks `(objects, group)`. Morphism
    /// `(j -> k, g)` of a block has index `offset + (j·n + k)·|G| + g`, and
    /// `(j -> k, g) ; (k -> l, h) = (j -> l, g·h)`.
    pub fn new(spec: &[(usize, Arc<FiniteGroup>)]) -> Self {
        let mut blocks = Vec::new();
        let (mut objs, mut mors) = (0, 0);
        for (n, g) in spec {
            blocks.push(Block { objects: *n, group: g.clone(), obj_offset: objs, mor_offset: mors });
            objs += n;
            mors += n * n * g.order();
        }
        let mut ends = Vec::with_capacity(mors);
        let mut inverse = Vec::with_capacity(mors);
        let mut identity = Vec::with_capacity(objs);
        for b in &blocks {
            let (n, ord) = (b.objects, b.group.order());
            for j in 0..n {
                identity.push(b.mor_offset + (j * n + j) * ord + b.group.identity());
                for k in 0..n {
                    for g in 0..ord {
                        ends.push((b.obj_offset + j, b.obj_offset + k));
                        inverse.push(b.mor_offset + (k * n + j) * ord + b.group.inverse(g));
                    }
                }
            }
        }
        let owner: Vec<usize> = blocks.iter().enumerate().flat_map(|(i, b)| std::iter::repeat(i).take(b.objects * b.objects * b.group.order())).collect();
        let table = blocks.clone();
        let groupoid = Arc::new(FiniteGroupoid::from_rule(objs, &ends, &identity, &inverse, move |f, h| {
            let b = &table[owner[f]];
            let (n, ord) = (b.objects, b.group.order());
            let (f, h) = (f - b.mor_offset, h - b.mor_offset);
            let (j, g1) = (f / ord / n, f % ord);
            let (l, g2) = (h / ord % n, h % ord);
            b.mor_offset + (j * n + l) * ord + b.group.mul(g1, g2)
        }));
        BlockGroupoid { groupoid, blocks }
    }

    fn morphism(&self, block: usize, j: usize, k: usize, g: usize) -> usize {
        let b = &self.blocks[block];
        b.mor_offset + (j * b.objects + k) * b.group.order() + g
    }
}

fn small_groups() -> Vec<Arc<FiniteGroup>> {
    vec![
        Arc::new(FiniteGroup::trivial()),
        Arc::new(FiniteGroup::cyclic(2)),
        Arc::new(FiniteGroup::cyclic(3)),
        Arc::new(FiniteGroup::cyclic(4)),
        Arc::new(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
        Arc::new(FiniteGroup::symmetric(3)),
    ]
}

/// A random groupoid with `1..=max_blocks` blocks of `1..=3` objects each.
pub fn random_groupoid(rng: &mut impl Rng, max_blocks: usize) -> BlockGroupoid {
    let groups = small_groups();
    let k = rng.gen_range(1..=max_blocks.max(1));
    let spec: Vec<_> = (0..k).map(|_| (rng.gen_range(1..=3), groups.choose(rng).unwrap().clone())).collect();
    BlockGroupoid::new(&spec)
}

/// A random functor. Panics if `to` is empty and `from` is not.
pub fn random_functor(rng: &mut impl Rng, from: &BlockGroupoid, to: &BlockGroupoid) -> GroupoidFunctor {
    let mut objects = vec![0; from.groupoid.num_objects()];
    let mut morphisms = vec![0; from.groupoid.num_morphisms()];
    for (bi, b) in from.blocks.iter().enumerate() {
        let ti = rng.gen_range(0..to.blocks.len());
        let t = &to.blocks[ti];
        let homs = b.group.homomorphisms_to(&t.group);
        let rho = homs.choose(rng).unwrap();
        let place: Vec<usize> = (0..b.objects).map(|_| rng.gen_range(0..t.objects)).collect();
        let gauge: Vec<usize> = (0..b.objects).map(|_| rng.gen_range(0..t.group.order())).collect();
        for j in 0..b.objects {
            objects[b.obj_offset + j] = t.obj_offset + place[j];
            for k in 0..b.objects {
                for g in 0..b.group.order() {
                    let image = t.group.mul(t.group.mul(t.group.inverse(gauge[j]), rho[g]), gauge[k]);
                    morphisms[from.morphism(bi, j, k, g)] = to.morphism(ti, place[j], place[k], image);
                }
            }
        }
    }
    GroupoidFunctor::new_unchecked(from.groupoid.clone(), to.groupoid.clone(), objects, morphisms)
}

/// A random span from `x` to `y` with a fresh random apex.
pub fn random_span(rng: &mut impl Rng, x: &BlockGroupoid, y: &BlockGroupoid, max_blocks: usize) -> SpanOfGroupoids {
    let apex = random_groupoid(rng, max_blocks);
    let left = random_functor(rng, &apex, y);
    let right = random_functor(rng, &apex, x);
    SpanOfGroupoids { apex: apex.groupoid, left, right }
}

/// A random groupoid over `x`.
pub fn random_over(rng: &mut impl Rng, x: &BlockGroupoid, max_blocks: usize) -> GroupoidOverX {
    let total = random_groupoid(rng, max_blocks);
    GroupoidOverX::new(random_functor(rng, &total, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_objects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let a = random_groupoid(&mut rng, 3);
            let b = random_groupoid(&mut rng, 3);
            assert!(a.groupoid.validate().is_valid());
            assert_eq!(a.groupoid.iso_classes().num_classes(), a.blocks.len());
            let f = random_functor(&mut rng, &a, &b);
            assert!(f.validate().is_empty(), "{:?}", f.validate());
        }
    }
}
