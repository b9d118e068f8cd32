//! Finite group actions and their weak quotients `S//G`.
//!
//! Orbits and stabilizers are found by scanning the whole group once per
//! orbit. Action groupoids can be materialized as [`FiniteGroupoid`]s, and
//! spans of G-sets can be degroupoidified straight from orbit data without
//! materializing anything.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::linalg::RationalMatrix;
use crate::rational::{recip, Rational};
use crate::span::{alpha_weight, Alpha};

/// A group given by its full multiplication table. `mul(a, b)` is the
/// product `a·b`; elements are `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    identity: usize,
    inverse: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupData {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Checks closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |msg: String| Err(Error::Domain(format!("not a group table: {msg}")));
        if n == 0 {
            return bad("empty".into());
        }
        if n > u16::MAX as usize {
            return bad(format!("order {n} exceeds {}", u16::MAX));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return bad("rows must have length n with entries below n".into());
        }
        let g = Self::from_fn_unchecked(n, |a, b| table[a][b]);
        if let Some(e) = (0..n).find(|&e| (0..n).all(|a| g.mul(e, a) == a && g.mul(a, e) == a)) {
            if e != g.identity {
                return bad("identity is not unique".into());
            }
        } else {
            return bad("no identity".into());
        }
        for a in 0..n {
            if g.mul(a, g.inverse(a)) != g.identity || g.mul(g.inverse(a), a) != g.identity {
                return bad(format!("element {a} has no inverse"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul(a, b);
                for c in 0..n {
                    if g.mul(ab, c) != g.mul(a, g.mul(b, c)) {
                        return bad(format!("({a} {b}) {c} != {a} ({b} {c})"));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Builds the table from `mul` without checking the axioms. The identity
    /// is taken to be the first left-neutral element; inverses are searched.
    pub fn from_fn_unchecked(order: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        assert!(order > 0 && order <= u16::MAX as usize);
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b) as u16);
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e * order + a] as usize == a))
            .unwrap_or(0);
        let mut inverse = vec![0u16; order];
        for a in 0..order {
            if let Some(b) = (0..order).find(|&b| table[a * order + b] as usize == identity) {
                inverse[a] = b as u16;
            }
        }
        FiniteGroup { order, mul: table, identity, inverse }
    }

    pub fn from_data(data: &GroupData) -> Result<Self> {
        if data.mul.len() != data.order {
            return Err(Error::Domain("group order does not match the table".into()));
        }
        Self::new(data.mul.clone())
    }

    pub fn to_data(&self) -> GroupData {
        GroupData {
            order: self.order,
            mul: (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect(),
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_fn_unchecked(n, |a, b| (a + b) % n)
    }

    /// Dihedral group of order `2n`: element `r^i s^j` is `2i + j`.
    pub fn dihedral(n: usize) -> Self {
        Self::from_fn_unchecked(2 * n, |a, b| {
            let (i, j) = (a / 2, a % 2);
            let (k, l) = (b / 2, b % 2);
            // r^i s^j r^k s^l = r^(i ± k) s^(j + l)
            let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
            2 * rot + (j + l) % 2
        })
    }

    /// Symmetric group on `n` letters, permutations in lexicographic order;
    /// `a·b` applies `b` first.
    pub fn symmetric(n: usize) -> Self {
        let perms = crate::perm::all_permutations(n);
        Self::from_fn_unchecked(perms.len(), |a, b| {
            crate::perm::rank(&crate::perm::compose(&perms[b], &perms[a]))
        })
    }

    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let m = h.order;
        Self::from_fn_unchecked(g.order * m, |a, b| g.mul(a / m, b / m) * m + h.mul(a % m, b % m))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        for g in 0..self.order {
            if !inside[g] {
                gens.push(g);
                inside = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    frontier.push(y);
                }
            }
        }
        inside
    }

    /// Every homomorphism into `target`, as element maps. Found by trying all
    /// images of the generators, so only sensible for small groups.
    pub fn homomorphisms_to(&self, target: &FiniteGroup) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut images = vec![0usize; gens.len()];
        loop {
            if let Some(map) = self.extend_hom(&gens, &images, target) {
                out.push(map);
            }
            let mut i = 0;
            loop {
                if i == images.len() {
                    return out;
                }
                images[i] += 1;
                if images[i] < target.order {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }

    fn extend_hom(&self, gens: &[usize], images: &[usize], target: &FiniteGroup) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order];
        map[self.identity] = target.identity;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for (&s, &t) in gens.iter().zip(images) {
                let y = self.mul(x, s);
                let img = target.mul(map[x], t);
                if map[y] == usize::MAX {
                    map[y] = img;
                    frontier.push(y);
                } else if map[y] != img {
                    return None;
                }
            }
        }
        let ok = (0..self.order)
            .all(|a| (0..self.order).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])));
        ok.then_some(map)
    }
}

impl FiniteGroupoid {
    /// The one-object groupoid whose automorphisms are the elements of `group`.
    pub fn from_group(group: &FiniteGroup) -> Self {
        let n = group.order();
        let ends = vec![(0, 0); n];
        let inverse: Vec<_> = (0..n).map(|a| group.inverse(a)).collect();
        let g = group.clone();
        // f then h is the product h·f, matching composition of actions
        FiniteGroupoid::from_rule(1, &ends, &[group.identity()], &inverse, move |f, h| g.mul(h, f))
    }
}

/// A left action of a finite group on `0..num_points`, possibly implicit.
/// Implementations must satisfy `act(e, p) = p` and
/// `act(g, act(h, p)) = act(g·h, p)`.
pub trait GroupAction: Sync {
    fn group_order(&self) -> usize;
    fn num_points(&self) -> usize;
    fn act(&self, g: usize, p: usize) -> usize;
}

#[derive(Debug, Clone)]
pub struct TableAction {
    group: Arc<FiniteGroup>,
    points: usize,
    table: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionData {
    pub group: GroupData,
    pub points: usize,
    pub act: Vec<Vec<usize>>,
}

impl TableAction {
    /// `act[g][p]` is the image of point `p` under element `g`.
    pub fn new(group: Arc<FiniteGroup>, points: usize, act: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidAction(m));
        if act.len() != group.order() || act.iter().any(|r| r.len() != points || r.iter().any(|&p| p >= points)) {
            return bad("table shape does not match group order and point count".into());
        }
        let a = Self::from_fn_unchecked(group, points, |g, p| act[g][p]);
        let e = a.group.identity();
        if let Some(p) = (0..points).find(|&p| a.act(e, p) != p) {
            return bad(format!("identity moves point {p}"));
        }
        for g in 0..a.group.order() {
            for h in 0..a.group.order() {
                let gh = a.group.mul(g, h);
                if let Some(p) = (0..points).find(|&p| a.act(g, a.act(h, p)) != a.act(gh, p)) {
                    return bad(format!("g={g}, h={h} disagree with their product on point {p}"));
                }
            }
        }
        Ok(a)
    }

    pub fn from_fn_unchecked(group: Arc<FiniteGroup>, points: usize, act: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(group.order() * points);
        for g in 0..group.order() {
            for p in 0..points {
                table.push(act(g, p) as u32);
            }
        }
        TableAction { group, points, table }
    }

    pub fn from_data(data: &ActionData) -> Result<Self> {
        let group = Arc::new(FiniteGroup::from_data(&data.group)?);
        Self::new(group, data.points, data.act.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_data(&serde_json::from_str(text)?)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
}

impl GroupAction for TableAction {
    fn group_order(&self) -> usize {
        self.group.order()
    }

    fn num_points(&self) -> usize {
        self.points
    }

    fn act(&self, g: usize, p: usize) -> usize {
        self.table[g * self.points + p] as usize
    }
}

/// Orbit decomposition of an action: the isomorphism classes and
/// automorphism orders of the weak quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbits {
    pub group_order: usize,
    pub orbit_of: Vec<u32>,
    /// Smallest point of each orbit; orbits are numbered in increasing order of it.
    pub representative: Vec<usize>,
    pub stabilizer_order: Vec<u64>,
    pub orbit_size: Vec<usize>,
    /// For each point `p`, some element carrying its representative to `p`.
    pub transporter: Vec<u32>,
}

impl Orbits {
    pub fn num_orbits(&self) -> usize {
        self.representative.len()
    }

    /// `Σ 1/|Stab|`, which equals `|S| / |G|`.
    pub fn cardinality(&self) -> Rational {
        self.stabilizer_order.iter().map(|&s| recip(s)).sum()
    }

    pub fn stabilizer_of_point(&self, p: usize) -> u64 {
        self.stabilizer_order[self.orbit_of[p] as usize]
    }
}

pub fn weak_quotient(a: &(impl GroupAction + ?Sized)) -> Orbits {
    const UNSEEN: u32 = u32::MAX;
    let n = a.num_points();
    let order = a.group_order();
    let mut orbit_of = vec![UNSEEN; n];
    let mut transporter = vec![0u32; n];
    let mut representative = Vec::new();
    let mut stabilizer_order = Vec::new();
    let mut orbit_size = Vec::new();
    for p in 0..n {
        if orbit_of[p] != UNSEEN {
            continue;
        }
        let id = representative.len() as u32;
        let (mut size, mut stab) = (0usize, 0u64);
        for g in 0..order {
            let q = a.act(g, p);
            if orbit_of[q] == UNSEEN {
                orbit_of[q] = id;
                transporter[q] = g as u32;
                size += 1;
            }
            if q == p {
                stab += 1;
            }
        }
        representative.push(p);
        stabilizer_order.push(stab);
        orbit_size.push(size);
    }
    Orbits { group_order: order, orbit_of, representative, stabilizer_order, orbit_size, transporter }
}

pub fn stabilizer(a: &(impl GroupAction + ?Sized), p: usize) -> Vec<usize> {
    (0..a.group_order()).filter(|&g| a.act(g, p) == p).collect()
}

/// The action groupoid `S//G`: objects are points, morphism `p·|G| + g`
/// runs from `p` to `g·p`.
pub fn materialize(a: &TableAction) -> Result<FiniteGroupoid> {
    let order = a.group_order();
    let n = a.num_points();
    crate::config::check_size("action groupoid morphisms", (n * order) as u128)?;
    let group = a.group().clone();
    let mut ends = Vec::with_capacity(n * order);
    let mut inverse = Vec::with_capacity(n * order);
    for p in 0..n {
        for g in 0..order {
            let q = a.act(g, p);
            ends.push((p, q));
            inverse.push(q * order + group.inverse(g));
        }
    }
    let identity: Vec<_> = (0..n).map(|p| p * order + group.identity()).collect();
    Ok(FiniteGroupoid::from_rule(n, &ends, &identity, &inverse, move |f, h| {
        let (p, g) = (f / order, f % order);
        (p * order) + group.mul(h % order, g)
    }))
}

/// One leg of an equivariant span: a map from apex points into a product of
/// G-sets (acted on diagonally). With one factor this is an ordinary
/// equivariant map.
pub struct Leg<'a> {
    pub factors: Vec<&'a dyn GroupAction>,
    pub map: Box<dyn Fn(usize) -> Vec<usize> + Sync + 'a>,
}

/// A span of G-sets, every action being by the same group.
pub struct EquivariantSpan<'a> {
    pub apex: &'a dyn GroupAction,
    pub left: Leg<'a>,
    pub right: Leg<'a>,
}

/// Orbits of each factor of a leg, plus mixed-radix numbering of orbit tuples.
pub struct LegOrbits {
    pub factors: Vec<Orbits>,
}

impl LegOrbits {
    fn new(leg: &Leg<'_>) -> Self {
        LegOrbits { factors: leg.factors.iter().map(|a| weak_quotient(*a)).collect() }
    }

    /// Number of orbit tuples (rows or columns of the matrix).
    pub fn len(&self) -> usize {
        self.factors.iter().map(Orbits::num_orbits).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lexicographic index of the tuple of orbits of `points`, and the
    /// automorphism order `Π |Stab|` of that tuple.
    pub fn locate(&self, points: &[usize]) -> (usize, u64) {
        let mut idx = 0;
        let mut aut = 1;
        for (o, &p) in self.factors.iter().zip(points) {
            idx = idx * o.num_orbits() + o.orbit_of[p] as usize;
            aut *= o.stabilizer_of_point(p);
        }
        (idx, aut)
    }

    pub fn tuple(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (i, o) in self.factors.iter().enumerate().rev() {
            out[i] = idx % o.num_orbits();
            idx /= o.num_orbits();
        }
        out
    }
}

pub struct EquivariantMatrix {
    pub matrix: RationalMatrix,
    pub rows: LegOrbits,
    pub cols: LegOrbits,
    pub apex: Orbits,
}

impl EquivariantSpan<'_> {
    fn check_groups(&self) -> Result<()> {
        let n = self.apex.group_order();
        let all = self.left.factors.iter().chain(&self.right.factors);
        if all.into_iter().any(|a| a.group_order() != n) {
            return Err(Error::InvalidAction("span mixes actions of different groups".into()));
        }
        Ok(())
    }

    /// Exhaustively checks that both legs commute with the action.
    pub fn check_equivariance(&self) -> bool {
        let order = self.apex.group_order();
        [&self.left, &self.right].iter().all(|leg| {
            (0..self.apex.num_points()).all(|p| {
                let image = (leg.map)(p);
                (0..order).all(|g| {
                    let moved = (leg.map)(self.apex.act(g, p));
                    leg.factors.iter().zip(&image).zip(&moved).all(|((a, &x), &y)| a.act(g, x) == y)
                })
            })
        })
    }
}

/// Degroupoidifies a span of G-sets from orbit data alone: entry
/// `(y, x)` sums `|Stab x|^(1-α) |Stab y|^α / |Stab s|` over apex orbits
/// lying over the orbit tuples `x` and `y`.
pub fn degroupoidify_equivariant(span: &EquivariantSpan<'_>, alpha: &Alpha) -> Result<EquivariantMatrix> {
    span.check_groups()?;
    let apex = weak_quotient(span.apex);
    let rows = LegOrbits::new(&span.left);
    let cols = LegOrbits::new(&span.right);
    let mut matrix = RationalMatrix::zeros(rows.len(), cols.len());
    for (o, &s) in apex.representative.iter().enumerate() {
        let (y, aut_y) = rows.locate(&(span.left.map)(s));
        let (x, aut_x) = cols.locate(&(span.right.map)(s));
        let w = alpha_weight(aut_x, aut_y, alpha)? * recip(apex.stabilizer_order[o]);
        matrix.add_at(y, x, &w);
    }
    Ok(EquivariantMatrix { matrix, rows, cols, apex })
}
