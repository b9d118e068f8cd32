use serde::Serialize;

use super::FiniteGroupoid;

/// Isomorphism classes of a groupoid. Classes are numbered in increasing
/// order of their representative, which is the smallest object in the class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoClassTable {
    pub class_of: Vec<usize>,
    pub representative: Vec<usize>,
    pub aut_order: Vec<u64>,
    pub class_size: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl IsoClassTable {
    pub(super) fn compute(g: &FiniteGroupoid) -> Self {
        let n = g.num_objects();
        let mut parent: Vec<usize> = (0..n).collect();
        for m in 0..g.num_morphisms() {
            let a = find(&mut parent, g.source(m));
            let b = find(&mut parent, g.target(m));
            if a != b {
                // keep the smaller index as root so roots are representatives
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut representative = Vec::new();
        let mut class_size = Vec::new();
        for x in 0..n {
            let root = find(&mut parent, x);
            if root == x {
                class_of[x] = representative.len();
                representative.push(x);
                class_size.push(0);
            }
            let c = class_of[root];
            class_of[x] = c;
            class_size[c] += 1;
        }
        let aut_order = representative
            .iter()
            .map(|&r| g.endomorphisms(r).count() as u64)
            .collect();
        IsoClassTable { class_of, representative, aut_order, class_size }
    }

    pub fn num_classes(&self) -> usize {
        self.representative.len()
    }
}
