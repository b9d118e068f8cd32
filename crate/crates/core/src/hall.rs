//! Hall algebras of simply-laced quivers over `F_q`.
//!
//! A representation assigns `F_q^{d_v}` to each vertex and a `d_t × d_s`
//! matrix to each edge `s → t`. Iso classes are the orbits of base change
//! `A_e ↦ g_t A_e g_s⁻¹` by `Π GL(d_v)`, found by applying every group
//! element; the class representative is the one whose entries, read edge by
//! edge in row-major order as base-`q` digits, form the smallest number.
//!
//! The product follows the literal formula
//! `[M]·[N] = Σ_E |P^E_{MN}| / (|Aut M| |Aut N|) [E]`, where `P^E_{MN}`
//! is the set of exact sequences `0 → N → E → M → 0`: `N` is the sub,
//! `M` the quotient.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::action::{weak_quotient, GroupAction, Orbits};
use crate::config::check_size;
use crate::error::{Error, Result};
use crate::fq::{Field, Mat};
use crate::groupoid::{product, FiniteGroupoid, GroupoidFunctor, GroupoidRef};
use crate::rational::{int, is_nonnegative, to_pq, Rational};
use crate::span::{degroupoidify_span, Alpha, SpanOfGroupoids};

/// Largest number of representations enumerated for one dimension vector.
pub const MAX_REPS: u64 = 1_000_000;
/// Largest base-change group `Π GL(d_v)` scanned.
pub const MAX_BASE_CHANGE: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub name: String,
    pub vertices: usize,
    /// `(source, target)`.
    pub edges: Vec<(usize, usize)>,
}

impl Quiver {
    /// Checks that the underlying graph is a disjoint union of ADE Dynkin
    /// diagrams, and names it after its components.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let types = dynkin_types(vertices, &edges)?;
        Ok(Quiver { name: types.join("+"), vertices, edges })
    }

    /// `A_n` with orientation given as `n-1` letters: `r` for `i → i+1`,
    /// `l` for `i+1 → i`.
    pub fn type_a(n: usize, orientation: &str) -> Result<Self> {
        if n == 0 || orientation.chars().count() != n - 1 {
            return Err(Error::Parse(format!("A{n} needs an orientation of {} letters, got {orientation:?}", n.saturating_sub(1))));
        }
        let edges = orientation
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                'r' => Ok((i, i + 1)),
                'l' => Ok((i + 1, i)),
                _ => Err(Error::Parse(format!("orientation letter {c:?} (expected r or l)"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut q = Quiver::new(n, edges)?;
        if n > 1 {
            q.name = format!("A{n}:{orientation}");
        }
        Ok(q)
    }

    /// `a1`, `a2`, `a3:rl`, ...; the orientation defaults to all `r`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (head, orientation) = match s.split_once(':') {
            Some((h, o)) => (h.to_string(), Some(o.to_string())),
            None => (s.clone(), None),
        };
        let n: usize = head
            .strip_prefix('a')
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| Error::Parse(format!("quiver {s:?}: expected a<n>[:orientation]")))?;
        let orientation = orientation.unwrap_or_else(|| "r".repeat(n.saturating_sub(1)));
        Self::type_a(n, &orientation)
    }
}

fn dynkin_types(vertices: usize, edges: &[(usize, usize)]) -> Result<Vec<String>> {
    let bad = |msg: String| Err(Error::Domain(format!("not a simply-laced Dynkin quiver: {msg}")));
    let mut adj = vec![Vec::new(); vertices];
    for &(s, t) in edges {
        if s >= vertices || t >= vertices {
            return bad(format!("edge ({s}, {t}) leaves the {vertices} vertices"));
        }
        if s == t {
            return bad(format!("loop at {s}"));
        }
        if adj[s].contains(&t) {
            return bad(format!("multiple edges between {s} and {t}"));
        }
        adj[s].push(t);
        adj[t].push(s);
    }
    let mut seen = vec![false; vertices];
    let mut types = Vec::new();
    for start in 0..vertices {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        let n = comp.len();
        let degree_sum: usize = comp.iter().map(|&v| adj[v].len()).sum();
        if degree_sum != 2 * (n - 1) {
            return bad("contains a cycle".into());
        }
        let branches: Vec<usize> = comp.iter().copied().filter(|&v| adj[v].len() > 2).collect();
        match branches.as_slice() {
            [] => types.push(format!("A{n}")),
            [c] if adj[*c].len() == 3 => {
                let mut arms: Vec<usize> = adj[*c]
                    .iter()
                    .map(|&first| {
                        let (mut prev, mut cur, mut len) = (*c, first, 1);
                        while adj[cur].len() == 2 {
                            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                            (prev, cur, len) = (cur, next, len + 1);
                        }
                        len
                    })
                    .collect();
                arms.sort();
                match arms.as_slice() {
                    [1, 1, _] => types.push(format!("D{n}")),
                    [1, 2, 2..=4] => types.push(format!("E{n}")),
                    _ => return bad(format!("branch arms {arms:?}")),
                }
            }
            _ => return bad("more than one branch point".into()),
        }
    }
    Ok(types)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuiverRep {
    pub dims: Vec<usize>,
    /// One matrix per edge, `d_target × d_source`.
    pub maps: Vec<Mat>,
}

impl QuiverRep {
    pub fn zero(quiver: &Quiver) -> Self {
        Self::zero_with(quiver, vec![0; quiver.vertices])
    }

    /// All maps zero; for dimension vector `e_v` this is the simple `S_v`.
    pub fn zero_with(quiver: &Quiver, dims: Vec<usize>) -> Self {
        let maps = quiver.edges.iter().map(|&(s, t)| Mat::zeros(dims[t], dims[s])).collect();
        QuiverRep { dims, maps }
    }

    pub fn new(quiver: &Quiver, dims: Vec<usize>, maps: Vec<Mat>) -> Result<Self> {
        let rep = QuiverRep { dims, maps };
        let ok = rep.dims.len() == quiver.vertices
            && rep.maps.len() == quiver.edges.len()
            && quiver.edges.iter().zip(&rep.maps).all(|(&(s, t), m)| m.rows == rep.dims[t] && m.cols == rep.dims[s]);
        if !ok {
            return Err(Error::Domain(format!("matrix shapes do not fit dimension vector {:?}", rep.dims)));
        }
        Ok(rep)
    }

    pub fn direct_sum(&self, other: &QuiverRep, quiver: &Quiver) -> QuiverRep {
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = quiver
            .edges
            .iter()
            .zip(self.maps.iter().zip(&other.maps))
            .map(|(&(s, t), (a, b))| {
                let mut m = Mat::zeros(dims[t], dims[s]);
                for i in 0..a.rows {
                    for j in 0..a.cols {
                        m.set(i, j, a.get(i, j));
                    }
                }
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        m.set(a.rows + i, a.cols + j, b.get(i, j));
                    }
                }
                m
            })
            .collect();
        QuiverRep { dims, maps }
    }

    /// `(d₁,…,d_n)` followed by each edge matrix, rows separated by `;`.
    pub fn label(&self) -> String {
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        let mut s = format!("({})", dims.join(","));
        for m in &self.maps {
            let rows: Vec<String> = (0..m.rows)
                .map(|i| (0..m.cols).map(|j| m.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            s.push_str(&format!("[{}]", rows.join(";")));
        }
        s
    }
}

/// Representations of one dimension vector, numbered by their entries.
struct RepSpace<'a> {
    quiver: &'a Quiver,
    field: Field,
    dims: Vec<usize>,
    count: usize,
    group: Vec<Vec<Mat>>,
    inverses: Vec<Vec<Mat>>,
}

impl<'a> RepSpace<'a> {
    fn new(quiver: &'a Quiver, field: Field, dims: Vec<usize>) -> Result<Self> {
        let entries: usize = quiver.edges.iter().map(|&(s, t)| dims[s] * dims[t]).sum();
        let count = (field.q() as u128).pow(entries as u32);
        if count > MAX_REPS as u128 {
            return Err(Error::SizeCap { what: "representations of one dimension vector", size: count, cap: MAX_REPS });
        }
        let order: u128 = dims.iter().map(|&d| crate::fq::gl_order(d as u32, field.q()) as u128).product();
        if order > MAX_BASE_CHANGE as u128 {
            return Err(Error::SizeCap { what: "base-change group", size: order, cap: MAX_BASE_CHANGE });
        }
        let gls: Vec<Vec<Mat>> = dims.iter().map(|&d| field.general_linear(d)).collect();
        let mut group: Vec<Vec<Mat>> = vec![Vec::new()];
        for gl in &gls {
            group = group.iter().flat_map(|g| gl.iter().map(move |x| [g.clone(), vec![x.clone()]].concat())).collect();
        }
        let inverses =
            group.iter().map(|g| g.iter().map(|x| field.inverse(x).expect("invertible")).collect()).collect();
        Ok(RepSpace { quiver, field, dims, count: count as usize, group, inverses })
    }

    fn decode(&self, mut code: usize) -> QuiverRep {
        let q = self.field.q() as usize;
        let mut maps: Vec<Mat> = self.quiver.edges.iter().map(|&(s, t)| Mat::zeros(self.dims[t], self.dims[s])).collect();
        for m in maps.iter_mut().rev() {
            for slot in m.data.iter_mut().rev() {
                *slot = (code % q) as u8;
                code /= q;
            }
        }
        QuiverRep { dims: self.dims.clone(), maps }
    }

    fn encode(&self, rep: &QuiverRep) -> usize {
        let q = self.field.q() as usize;
        rep.maps.iter().flat_map(|m| &m.data).fold(0, |acc, &x| acc * q + x as usize)
    }

    fn transform(&self, g: usize, rep: &QuiverRep) -> QuiverRep {
        let f = &self.field;
        let maps = self
            .quiver
            .edges
            .iter()
            .zip(&rep.maps)
            .map(|(&(s, t), m)| f.mat_mul(&f.mat_mul(&self.group[g][t], m), &self.inverses[g][s]))
            .collect();
        QuiverRep { dims: rep.dims.clone(), maps }
    }
}

impl GroupAction for RepSpace<'_> {
    fn group_order(&self) -> usize {
        self.group.len()
    }

    fn num_points(&self) -> usize {
        self.count
    }

    fn act(&self, g: usize, p: usize) -> usize {
        self.encode(&self.transform(g, &self.decode(p)))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RepClass {
    pub label: String,
    pub dims: Vec<usize>,
    pub rep: QuiverRep,
    pub aut_order: u64,
    pub class_size: u64,
}

#[derive(Debug, Clone)]
struct DimBlock {
    dims: Vec<usize>,
    orbits: Orbits,
    base_change_order: u64,
    first_class: usize,
}

/// Iso classes of representations for every dimension vector `≤ dmax`
/// (componentwise), ordered by dimension vector and then by representative.
#[derive(Debug, Clone)]
pub struct RepClassTable {
    pub quiver: Quiver,
    pub field: Field,
    pub dmax: Vec<usize>,
    pub classes: Vec<RepClass>,
    blocks: Vec<DimBlock>,
    block_of_dims: HashMap<Vec<usize>, usize>,
}

/// The iso classes of one dimension vector.
pub fn enumerate_reps(quiver: &Quiver, dims: &[usize], q: u64) -> Result<Vec<RepClass>> {
    Ok(RepClassTable::new(quiver, q, dims)?.classes.into_iter().filter(|c| c.dims == dims).collect())
}

fn dimension_vectors(dmax: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &m in dmax {
        out = out.into_iter().flat_map(|v| (0..=m).map(move |d| [v.clone(), vec![d]].concat())).collect();
    }
    out
}

impl RepClassTable {
    pub fn new(quiver: &Quiver, q: u64, dmax: &[usize]) -> Result<Self> {
        let field = Field::new(q)?;
        if dmax.len() != quiver.vertices {
            return Err(Error::Domain(format!(
                "dimension bound {dmax:?} has {} entries for {} vertices",
                dmax.len(),
                quiver.vertices
            )));
        }
        let mut classes = Vec::new();
        let mut blocks = Vec::new();
        let mut block_of_dims = HashMap::new();
        for dims in dimension_vectors(dmax) {
            let space = RepSpace::new(quiver, field, dims.clone())?;
            let orbits = weak_quotient(&space);
            let first_class = classes.len();
            for (o, &r) in orbits.representative.iter().enumerate() {
                let rep = space.decode(r);
                let aut_order = orbits.stabilizer_order[o];
                classes.push(RepClass {
                    label: rep.label(),
                    dims: dims.clone(),
                    rep,
                    aut_order,
                    class_size: space.group.len() as u64 / aut_order,
                });
            }
            block_of_dims.insert(dims.clone(), blocks.len());
            blocks.push(DimBlock { dims, orbits, base_change_order: space.group.len() as u64, first_class });
        }
        Ok(RepClassTable { quiver: quiver.clone(), field, dmax: dmax.to_vec(), classes, blocks, block_of_dims })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn dimension_vectors(&self) -> impl Iterator<Item = &[usize]> {
        self.blocks.iter().map(|b| b.dims.as_slice())
    }

    /// `|Π GL(d_v)|` for the given dimension vector.
    pub fn base_change_order(&self, dims: &[usize]) -> Option<u64> {
        self.block_of_dims.get(dims).map(|&b| self.blocks[b].base_change_order)
    }

    /// The class indices of one dimension vector.
    pub fn classes_of_dims(&self, dims: &[usize]) -> std::ops::Range<usize> {
        match self.block_of_dims.get(dims) {
            Some(&b) => {
                let block = &self.blocks[b];
                block.first_class..block.first_class + block.orbits.num_orbits()
            }
            None => 0..0,
        }
    }

    /// The class of an arbitrary representation within the bound.
    pub fn classify(&self, rep: &QuiverRep) -> Option<usize> {
        let block = &self.blocks[*self.block_of_dims.get(&rep.dims)?];
        let space = RepSpace::new(&self.quiver, self.field, rep.dims.clone()).ok()?;
        Some(block.first_class + block.orbits.orbit_of[space.encode(rep)] as usize)
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// The class of the zero representation.
    pub fn zero(&self) -> usize {
        self.classes_of_dims(&vec![0; self.quiver.vertices]).start
    }

    /// `Aut` of the class representative, as tuples of matrices.
    pub fn automorphisms(&self, class: usize) -> Vec<Vec<Mat>> {
        let c = &self.classes[class];
        let space = RepSpace::new(&self.quiver, self.field, c.dims.clone()).expect("within bounds");
        (0..space.group.len())
            .filter(|&g| space.transform(g, &c.rep) == c.rep)
            .map(|g| space.group[g].clone())
            .collect()
    }

    fn sum_dims(&self, a: usize, b: usize) -> Vec<usize> {
        self.classes[a].dims.iter().zip(&self.classes[b].dims).map(|(x, y)| x + y).collect()
    }
}

/// All morphisms of representations `from → to`, by enumerating every tuple
/// of matrices and keeping those that commute with the edge maps.
pub fn morphisms(quiver: &Quiver, field: &Field, from: &QuiverRep, to: &QuiverRep) -> Result<Vec<Vec<Mat>>> {
    let entries: usize = from.dims.iter().zip(&to.dims).map(|(a, b)| a * b).sum();
    let q = field.q() as usize;
    let total = (q as u128).pow(entries as u32);
    check_size("morphism candidates", total)?;
    let mut out = Vec::new();
    for mut code in 0..total as usize {
        let mut phi: Vec<Mat> = from.dims.iter().zip(&to.dims).map(|(&a, &b)| Mat::zeros(b, a)).collect();
        for m in phi.iter_mut().rev() {
            for slot in m.data.iter_mut().rev() {
                *slot = (code % q) as u8;
                code /= q;
            }
        }
        let commutes = quiver.edges.iter().enumerate().all(|(e, &(s, t))| {
            field.mat_mul(&phi[t], &from.maps[e]) == field.mat_mul(&to.maps[e], &phi[s])
        });
        if commutes {
            out.push(phi);
        }
    }
    Ok(out)
}

/// An exact sequence `0 → N → E → M → 0` as `(f, g)`.
pub type ExactSequence = (Vec<Mat>, Vec<Mat>);

/// `P^E_{MN}` for class representatives, by brute force: injective `f`,
/// surjective `g`, `g f = 0`. With dimensions adding up this is exactness.
pub fn exact_sequences(table: &RepClassTable, m: usize, n: usize, e: usize) -> Result<Vec<ExactSequence>> {
    let (cm, cn, ce) = (&table.classes[m], &table.classes[n], &table.classes[e]);
    if table.sum_dims(m, n) != ce.dims {
        return Ok(Vec::new());
    }
    let f = &table.field;
    let full_rank = |phi: &Vec<Mat>, dims: &[usize]| phi.iter().zip(dims).all(|(x, &d)| f.rank(x) == d);
    let inj: Vec<_> = morphisms(&table.quiver, f, &cn.rep, &ce.rep)?.into_iter().filter(|x| full_rank(x, &cn.dims)).collect();
    let surj: Vec<_> = morphisms(&table.quiver, f, &ce.rep, &cm.rep)?.into_iter().filter(|x| full_rank(x, &cm.dims)).collect();
    let mut out = Vec::new();
    for a in &inj {
        for b in &surj {
            if a.iter().zip(b).all(|(x, y)| f.mat_mul(y, x).is_zero()) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

/// `|P^E_{MN}|`; zero unless `dim E = dim M + dim N`.
pub fn hall_number(table: &RepClassTable, m: usize, n: usize, e: usize) -> Result<u64> {
    Ok(exact_sequences(table, m, n, e)?.len() as u64)
}

/// A finite rational combination of iso classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HallElement {
    pub terms: BTreeMap<usize, Rational>,
}

impl HallElement {
    pub fn basis(class: usize) -> Self {
        HallElement { terms: BTreeMap::from([(class, int(1))]) }
    }

    pub fn add_term(&mut self, class: usize, c: &Rational) {
        let entry = self.terms.entry(class).or_insert_with(|| int(0));
        *entry += c;
        if *entry == int(0) {
            self.terms.remove(&class);
        }
    }

    pub fn coefficient(&self, class: usize) -> Rational {
        self.terms.get(&class).cloned().unwrap_or_else(|| int(0))
    }

    pub fn display<'a>(&'a self, table: &'a RepClassTable) -> impl fmt::Display + 'a {
        DisplayElement { e: self, table }
    }

    pub fn to_labels(&self, table: &RepClassTable) -> BTreeMap<String, String> {
        self.terms.iter().map(|(&c, x)| (table.classes[c].label.clone(), to_pq(x))).collect()
    }
}

struct DisplayElement<'a> {
    e: &'a HallElement,
    table: &'a RepClassTable,
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .e
            .terms
            .iter()
            .map(|(&c, x)| format!("{} {}", to_pq(x), self.table.classes[c].label))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `[M]·[N] = Σ_E |P^E_{MN}| / (|Aut M| |Aut N|) [E]`.
pub fn hall_product(table: &RepClassTable, m: usize, n: usize) -> Result<HallElement> {
    let dims = table.sum_dims(m, n);
    let targets = table.classes_of_dims(&dims);
    if targets.is_empty() {
        return Err(Error::Domain(format!("dimension {dims:?} lies outside the enumerated bound {:?}", table.dmax)));
    }
    let denom = int(table.classes[m].aut_order) * int(table.classes[n].aut_order);
    let mut out = HallElement::default();
    for e in targets {
        let count = hall_number(table, m, n, e)?;
        if count > 0 {
            out.add_term(e, &(int(count) / &denom));
        }
    }
    Ok(out)
}

/// `Aut` of a class representative, with multiplication by lookup.
#[derive(Debug)]
struct AutGroup {
    field: Field,
    elements: Vec<Vec<Mat>>,
    inverses: Vec<Vec<Mat>>,
    index: HashMap<Vec<Mat>, usize>,
}

impl AutGroup {
    fn new(table: &RepClassTable, class: usize) -> Self {
        let field = table.field;
        let elements = table.automorphisms(class);
        let inverses = elements.iter().map(|g| g.iter().map(|x| field.inverse(x).expect("automorphism")).collect()).collect();
        let index = elements.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        AutGroup { field, elements, inverses, index }
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let ab: Vec<Mat> = self.elements[a].iter().zip(&self.elements[b]).map(|(x, y)| self.field.mat_mul(x, y)).collect();
        self.index[&ab]
    }

    fn inverse(&self, a: usize) -> usize {
        self.index[&self.inverses[a]]
    }

    fn identity(&self) -> usize {
        self.index[&self.elements[0].iter().map(|m| Mat::identity(m.rows)).collect::<Vec<_>>()]
    }
}

/// The full subgroupoid of the skeleton of `X` on the given classes: one
/// object per class, its morphisms the automorphisms of the representative.
/// Morphism `offset[i] + g` is element `g` of `groups[i]`.
fn aut_skeleton(groups: Vec<Arc<AutGroup>>) -> (GroupoidRef, Vec<usize>) {
    let mut offset = Vec::new();
    let mut ends = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        offset.push(ends.len());
        ends.extend(std::iter::repeat((i, i)).take(g.len()));
    }
    let owner: Vec<usize> = ends.iter().map(|e| e.0).collect();
    let identity: Vec<usize> = groups.iter().zip(&offset).map(|(g, o)| o + g.identity()).collect();
    let inverse: Vec<usize> = (0..ends.len()).map(|x| offset[owner[x]] + groups[owner[x]].inverse(x - offset[owner[x]])).collect();
    let off = offset.clone();
    let g = FiniteGroupoid::from_rule(groups.len(), &ends, &identity, &inverse, move |f, h| {
        let o = owner[f];
        off[o] + groups[o].mul(h - off[o], f - off[o])
    });
    (Arc::new(g), offset)
}

/// Skeletal weak quotient of `P^E_{MN}` by `Aut N × Aut E × Aut M`: one
/// object per orbit, morphisms the stabilizer of its representative as
/// index triples `(a, b, c)`.
fn ses_quotient(
    field: &Field,
    seqs: &[ExactSequence],
    (gn, ge, gm): (&AutGroup, &AutGroup, &AutGroup),
) -> Vec<Vec<(usize, usize, usize)>> {
    let index: HashMap<&ExactSequence, usize> = seqs.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mul = |xs: &[Mat], ys: &[Mat]| -> Vec<Mat> { xs.iter().zip(ys).map(|(x, y)| field.mat_mul(x, y)).collect() };
    // the three factors commute, so orbits can be swept one factor at a time
    let act_n = |a: usize, p: usize| index[&(mul(&seqs[p].0, &gn.inverses[a]), seqs[p].1.clone())];
    let act_e = |b: usize, p: usize| {
        let (x, y) = &seqs[p];
        index[&(mul(&ge.elements[b], x), mul(y, &ge.inverses[b]))]
    };
    let act_m = |c: usize, p: usize| index[&(seqs[p].0.clone(), mul(&gm.elements[c], &seqs[p].1))];
    let (en, ee, em) = (gn.identity(), ge.identity(), gm.identity());
    let mut seen = vec![false; seqs.len()];
    let mut out = Vec::new();
    for p in 0..seqs.len() {
        if seen[p] {
            continue;
        }
        let mut orbit = vec![p];
        seen[p] = true;
        for (order, act) in [(gn.len(), &act_n as &dyn Fn(usize, usize) -> usize), (ge.len(), &act_e), (gm.len(), &act_m)] {
            let mut i = 0;
            let end = orbit.len();
            while i < end {
                for g in 0..order {
                    let y = act(g, orbit[i]);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
        }
        // (a, b⁻¹, c) fixes p exactly when (a, c)·p = b·p
        let mut by_image: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for a in 0..gn.len() {
            let x = act_n(a, p);
            for c in 0..gm.len() {
                by_image.entry(act_m(c, x)).or_default().push((a, c));
            }
        }
        let mut stab = Vec::new();
        for b in 0..ge.len() {
            for &(a, c) in by_image.get(&act_e(b, p)).into_iter().flatten() {
                stab.push((a, ge.inverse(b), c));
            }
        }
        stab.sort();
        debug_assert_eq!(stab.len() * orbit.len(), gn.len() * ge.len() * gm.len());
        debug_assert!(stab.contains(&(en, ee, em)));
        out.push(stab);
    }
    out
}

/// The product read off an actual span of groupoids `X ← SES → X × X`,
/// degroupoidified at α = 1.
///
/// For each `E` the apex block is the weak quotient of `P^E_{MN}` by
/// `Aut N × Aut E × Aut M`, acting by `(a, b, c)·(f, g) = (b f a⁻¹, c g b⁻¹)`,
/// kept skeletal. The left leg sends `(a, b, c)` to `b`, the right leg to
/// `(c, a)`; the codomains are the full subgroupoids of the skeleton of `X`
/// (and of `X × X`) on the classes that occur.
pub fn hall_product_via_span(table: &RepClassTable, m: usize, n: usize) -> Result<HallElement> {
    let field = table.field;
    let dims = table.sum_dims(m, n);
    let targets: Vec<usize> = table.classes_of_dims(&dims).collect();
    if targets.is_empty() {
        return Err(Error::Domain(format!("dimension {dims:?} lies outside the enumerated bound {:?}", table.dmax)));
    }
    let (gm, gn) = (Arc::new(AutGroup::new(table, m)), Arc::new(AutGroup::new(table, n)));
    let ges: Vec<Arc<AutGroup>> = targets.iter().map(|&e| Arc::new(AutGroup::new(table, e))).collect();
    let (x_e, off_e) = aut_skeleton(ges.clone());
    let (x_m, _) = aut_skeleton(vec![gm.clone()]);
    let (x_n, _) = aut_skeleton(vec![gn.clone()]);
    let x_mn = product(&x_m, &x_n).groupoid;

    let mut ends = Vec::new();
    let mut identity = Vec::new();
    let mut elements: Vec<(usize, usize, usize)> = Vec::new();
    let mut owner = Vec::new();
    let (mut left_obj, mut left_mor, mut right_mor) = (Vec::new(), Vec::new(), Vec::new());
    let mut lookups: Vec<(usize, HashMap<(usize, usize, usize), usize>)> = Vec::new();
    for (i, &e) in targets.iter().enumerate() {
        let seqs = exact_sequences(table, m, n, e)?;
        let scan = gn.len() as u128 * gm.len() as u128 + ges[i].len() as u128;
        check_size("stabilizer scan for short exact sequences", scan)?;
        for stab in ses_quotient(&field, &seqs, (&gn, &ges[i], &gm)) {
            check_size("SES groupoid morphisms", (elements.len() + stab.len()) as u128)?;
            let obj = left_obj.len();
            left_obj.push(i);
            let start = elements.len();
            let lookup: HashMap<_, _> = stab.iter().enumerate().map(|(j, &t)| (t, start + j)).collect();
            for &(a, b, c) in &stab {
                ends.push((obj, obj));
                owner.push(i);
                elements.push((a, b, c));
                left_mor.push(off_e[i] + b);
                right_mor.push(c * gn.len() + a);
            }
            identity.push(lookup[&(gn.identity(), ges[i].identity(), gm.identity())]);
            lookups.push((i, lookup));
        }
    }
    let inverse: Vec<usize> = (0..elements.len())
        .map(|x| {
            let (a, b, c) = elements[x];
            let obj = ends[x].0;
            lookups[obj].1[&(gn.inverse(a), ges[owner[x]].inverse(b), gm.inverse(c))]
        })
        .collect();
    let obj_of: Vec<usize> = ends.iter().map(|e| e.0).collect();
    let els = elements.clone();
    let (gn2, gm2, ges2) = (gn.clone(), gm.clone(), ges.clone());
    let apex: GroupoidRef = Arc::new(FiniteGroupoid::from_rule(left_obj.len(), &ends, &identity, &inverse, move |f, h| {
        let ((a1, b1, c1), (a2, b2, c2)) = (els[f], els[h]);
        let g = &ges2[lookups[obj_of[f]].0];
        lookups[obj_of[f]].1[&(gn2.mul(a2, a1), g.mul(b2, b1), gm2.mul(c2, c1))]
    }));
    let right_obj = vec![0; left_obj.len()];
    let left = GroupoidFunctor::new_unchecked(apex.clone(), x_e.clone(), left_obj, left_mor);
    let right = GroupoidFunctor::new_unchecked(apex, x_mn, right_obj, right_mor);
    let span = SpanOfGroupoids::new(left, right)?;
    let matrix = degroupoidify_span(&span, &Alpha::integer(1))?;

    let rows = &x_e.iso_classes().class_of;
    let mut out = HallElement::default();
    for (i, &e) in targets.iter().enumerate() {
        let c = matrix.get(rows[i], 0);
        if *c != int(0) {
            out.add_term(e, c);
        }
    }
    Ok(out)
}

/// Every product `[M]·[N]` whose dimension stays within the table's bound.
#[derive(Debug, Clone)]
pub struct HallAlgebra {
    pub table: RepClassTable,
    pub products: BTreeMap<(usize, usize), HallElement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssociativityReport {
    pub triples_checked: usize,
    /// Class labels of the failing triples.
    pub failures: Vec<(String, String, String)>,
}

impl AssociativityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HallClassJson {
    pub label: String,
    pub dims: Vec<usize>,
    pub aut_order: u64,
    pub class_size: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HallTableJson {
    pub quiver: String,
    pub q: u64,
    pub dmax: Vec<usize>,
    pub alpha: String,
    pub convention: String,
    pub classes: Vec<HallClassJson>,
    /// `"M * N"` to `{E: "p/q"}`.
    pub products: BTreeMap<String, BTreeMap<String, String>>,
}

impl HallAlgebra {
    pub fn new(quiver: &Quiver, q: u64, dmax: &[usize]) -> Result<Self> {
        let table = RepClassTable::new(quiver, q, dmax)?;
        let mut products = BTreeMap::new();
        for (m, n) in Self::pairs_within(&table) {
            products.insert((m, n), hall_product(&table, m, n)?);
        }
        Ok(HallAlgebra { table, products })
    }

    fn within(table: &RepClassTable, dims: &[usize]) -> bool {
        dims.iter().zip(&table.dmax).all(|(a, b)| a <= b)
    }

    fn pairs_within(table: &RepClassTable) -> Vec<(usize, usize)> {
        let n = table.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| Self::within(table, &table.sum_dims(a, b)))
            .collect()
    }

    pub fn product(&self, m: usize, n: usize) -> Option<&HallElement> {
        self.products.get(&(m, n))
    }

    /// Bilinear extension of the stored products.
    pub fn multiply(&self, x: &HallElement, y: &HallElement) -> Option<HallElement> {
        let mut out = HallElement::default();
        for (&a, ca) in &x.terms {
            for (&b, cb) in &y.terms {
                for (&e, ce) in &self.product(a, b)?.terms {
                    out.add_term(e, &(ca * cb * ce));
                }
            }
        }
        Some(out)
    }

    /// `([M]·[N])·[L] = [M]·([N]·[L])` for every triple within the bound.
    pub fn check_associativity(&self) -> AssociativityReport {
        let t = &self.table;
        let mut report = AssociativityReport { triples_checked: 0, failures: Vec::new() };
        for &(m, n) in self.products.keys() {
            for l in 0..t.len() {
                let dims: Vec<usize> = t.sum_dims(m, n).iter().zip(&t.classes[l].dims).map(|(a, b)| a + b).collect();
                if !Self::within(t, &dims) {
                    continue;
                }
                report.triples_checked += 1;
                let (bm, bn, bl) = (HallElement::basis(m), HallElement::basis(n), HallElement::basis(l));
                let lhs = self.multiply(&self.multiply(&bm, &bn).unwrap(), &bl);
                let rhs = self.multiply(&bm, &self.multiply(&bn, &bl).unwrap());
                if lhs.is_none() || lhs != rhs {
                    let name = |c: usize| t.classes[c].label.clone();
                    report.failures.push((name(m), name(n), name(l)));
                }
            }
        }
        report
    }

    /// Pairs where the span route disagrees with the counting formula.
    pub fn check_against_span(&self) -> Result<Vec<(usize, usize)>> {
        let mut bad = Vec::new();
        for (&(m, n), p) in &self.products {
            if &hall_product_via_span(&self.table, m, n)? != p {
                bad.push((m, n));
            }
        }
        Ok(bad)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.products.values().flat_map(|p| p.terms.values()).all(is_nonnegative)
    }

    pub fn to_json(&self) -> HallTableJson {
        let t = &self.table;
        HallTableJson {
            quiver: t.quiver.name.clone(),
            q: t.q(),
            dmax: t.dmax.clone(),
            alpha: "1".into(),
            convention: "[M]*[N] counts exact sequences 0 -> N -> E -> M -> 0 (N sub, M quotient)".into(),
            classes: t
                .classes
                .iter()
                .map(|c| HallClassJson { label: c.label.clone(), dims: c.dims.clone(), aut_order: c.aut_order, class_size: c.class_size })
                .collect(),
            products: self
                .products
                .iter()
                .map(|(&(m, n), p)| (format!("{} * {}", t.classes[m].label, t.classes[n].label), p.to_labels(t)))
                .collect(),
        }
    }
}
