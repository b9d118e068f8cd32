//! The A₂ Hecke algebra from flags in the projective plane over `F_q`.
//!
//! A flag is a point on a line. Points are 1-dimensional subspaces of
//! `F_q³`, stored as vectors whose first nonzero entry is 1; lines are
//! 2-dimensional subspaces, stored by a normal covector normalized the same
//! way. `SL(3, q)` acts on points by `v ↦ g v` and on lines by `ℓ ↦ ℓ g⁻¹`.
//!
//! The six orbits of `SL(3, q)` on pairs of flags `((p, ℓ), (p', ℓ'))` are
//! labeled by words in the generators, read in the order of relation
//! composition (`PL` means "a `P` step, then an `L` step"):
//!
//! | label | condition |
//! |-------|-----------|
//! | `e`   | `p = p'`, `ℓ = ℓ'` |
//! | `P`   | `ℓ = ℓ'`, `p ≠ p'` |
//! | `L`   | `p = p'`, `ℓ ≠ ℓ'` |
//! | `PL`  | `p ≠ p'`, `ℓ ≠ ℓ'`, `p' ∈ ℓ` |
//! | `LP`  | `p ≠ p'`, `ℓ ≠ ℓ'`, `p ∈ ℓ'` |
//! | `PLP` | everything else |

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::action::{degroupoidify_equivariant, materialize, weak_quotient, EquivariantSpan, FiniteGroup, GroupAction, Leg, Orbits, TableAction};
use crate::config::check_size;
use crate::error::{Error, Result};
use crate::fq::{Field, Mat};
use crate::groupoid::{product, FiniteGroupoid, GroupoidFunctor};
use crate::linalg::{MatrixJson, RationalMatrix};
use crate::rational::{int, pow_i, to_pq, Rational};
use crate::span::{degroupoidify_span, Alpha, AlphaKind, SpanOfGroupoids};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BruhatCell {
    E,
    P,
    L,
    PL,
    LP,
    PLP,
}

impl BruhatCell {
    pub const ALL: [BruhatCell; 6] =
        [BruhatCell::E, BruhatCell::P, BruhatCell::L, BruhatCell::PL, BruhatCell::LP, BruhatCell::PLP];

    pub fn label(self) -> &'static str {
        match self {
            BruhatCell::E => "e",
            BruhatCell::P => "P",
            BruhatCell::L => "L",
            BruhatCell::PL => "PL",
            BruhatCell::LP => "LP",
            BruhatCell::PLP => "PLP",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BruhatCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Points, lines and flags of the projective plane over `F_q`.
#[derive(Debug, Clone)]
pub struct FlagGeometry {
    pub field: Field,
    pub points: Vec<[u8; 3]>,
    pub lines: Vec<[u8; 3]>,
    /// `(point, line)` index pairs, sorted.
    pub flags: Vec<(usize, usize)>,
    point_index: HashMap<[u8; 3], usize>,
    line_index: HashMap<[u8; 3], usize>,
    flag_index: HashMap<(usize, usize), usize>,
}

fn normalized_vectors(field: &Field) -> Vec<[u8; 3]> {
    let q = field.q() as u8;
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let v = [a, b, c];
                if v.iter().find(|&&x| x != 0) == Some(&1) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Every flag over `F_q`, for a prime `q`.
pub fn enumerate_flags(q: u64) -> Result<FlagGeometry> {
    let field = Field::new(q)?;
    let points = normalized_vectors(&field);
    let lines = points.clone();
    let mut flags = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for (j, l) in lines.iter().enumerate() {
            if field.dot(p, l) == 0 {
                flags.push((i, j));
            }
        }
    }
    let point_index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let line_index = lines.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let flag_index = flags.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    Ok(FlagGeometry { field, points, lines, flags, point_index, line_index, flag_index })
}

impl FlagGeometry {
    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn num_flags(&self) -> usize {
        self.flags.len()
    }

    pub fn flag(&self, point: usize, line: usize) -> Option<usize> {
        self.flag_index.get(&(point, line)).copied()
    }

    pub fn incident(&self, point: usize, line: usize) -> bool {
        self.field.dot(&self.points[point], &self.lines[line]) == 0
    }

    pub fn points_on(&self, line: usize) -> Vec<usize> {
        (0..self.points.len()).filter(|&p| self.incident(p, line)).collect()
    }

    fn cross(&self, a: &[u8; 3], b: &[u8; 3]) -> [u8; 3] {
        let f = &self.field;
        let c = |i: usize, j: usize| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
        let v = [c(1, 2), c(2, 0), c(0, 1)];
        let n = f.normalize(&v);
        [n[0], n[1], n[2]]
    }

    /// The line through two distinct points.
    pub fn join(&self, p1: usize, p2: usize) -> usize {
        self.line_index[&self.cross(&self.points[p1], &self.points[p2])]
    }

    /// The point where two distinct lines meet.
    pub fn meet(&self, l1: usize, l2: usize) -> usize {
        self.point_index[&self.cross(&self.lines[l1], &self.lines[l2])]
    }

    /// The relative position of two flags, from incidence alone.
    pub fn cell(&self, f: usize, g: usize) -> BruhatCell {
        let ((p, l), (p2, l2)) = (self.flags[f], self.flags[g]);
        match (p == p2, l == l2) {
            (true, true) => BruhatCell::E,
            (false, true) => BruhatCell::P,
            (true, false) => BruhatCell::L,
            (false, false) if self.incident(p2, l) => BruhatCell::PL,
            (false, false) if self.incident(p, l2) => BruhatCell::LP,
            _ => BruhatCell::PLP,
        }
    }

    /// The 0/1 matrix of the relation "flags `f`, `g` lie in `cell`".
    pub fn relation(&self, cell: BruhatCell) -> IntMatrix {
        let n = self.num_flags();
        IntMatrix::from_fn(n, |i, j| i64::from(self.cell(i, j) == cell))
    }
}

/// `P`: same line, different point.
pub fn build_p(geom: &FlagGeometry) -> IntMatrix {
    geom.relation(BruhatCell::P)
}

/// `L`: same point, different line.
pub fn build_l(geom: &FlagGeometry) -> IntMatrix {
    geom.relation(BruhatCell::L)
}

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub n: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        IntMatrix { n, data: (0..n * n).map(|k| f(k / n, k % n)).collect() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| i64::from(i == j))
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a != 0 {
                    for j in 0..n {
                        data[i * n + j] += a * other.data[k * n + j];
                    }
                }
            }
        }
        IntMatrix { n, data }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: i64, other: &IntMatrix, b: i64) -> IntMatrix {
        IntMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.data.chunks(self.n).map(|r| r.iter().sum()).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeckeReport {
    pub q: u64,
    pub flags: usize,
    pub checks: Vec<RelationCheck>,
}

impl HeckeReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks `P² = (q-1)P + q`, `L² = (q-1)L + q` and `PLP = LPL` as integer
/// matrices over the flags.
pub fn verify_hecke_relations(q: u64) -> Result<HeckeReport> {
    let geom = enumerate_flags(q)?;
    let (p, l) = (build_p(&geom), build_l(&geom));
    let id = IntMatrix::identity(geom.num_flags());
    let q = q as i64;
    let quadratic = |m: &IntMatrix| m.mul(m) == m.combine(q - 1, &id, q);
    let checks = vec![
        RelationCheck { name: "P^2 = (q-1)P + q".into(), passed: quadratic(&p) },
        RelationCheck { name: "L^2 = (q-1)L + q".into(), passed: quadratic(&l) },
        RelationCheck { name: "PLP = LPL".into(), passed: p.mul(&l).mul(&p) == l.mul(&p).mul(&l) },
    ];
    Ok(HeckeReport { q: q as u64, flags: geom.num_flags(), checks })
}

/// Counts of `PLP` and `LPL` chains and whether the explicit
/// correspondence between them is a bijection preserving endpoints.
#[derive(Debug, Clone, Serialize)]
pub struct YangBaxter {
    pub plp_chains: usize,
    pub lpl_chains: usize,
    pub bijective: bool,
}

/// A `PLP` chain `f₁ P f₂ L f₃ P f₄` with endpoints `(p₁, ℓ₁)`, `(p₄, ℓ₄)`
/// goes to the `LPL` chain through `(p₁, m)` and `(p₄, m)`, where `m` is the
/// line through `p₁` and `p₄`.
pub fn yang_baxter_bijection(geom: &FlagGeometry) -> YangBaxter {
    let n = geom.num_flags();
    let step = |f: usize, cell: BruhatCell| (0..n).filter(move |&g| geom.cell(f, g) == cell);
    let chains = |a: BruhatCell, b: BruhatCell| {
        let mut out = Vec::new();
        for f1 in 0..n {
            for f2 in step(f1, a) {
                for f3 in step(f2, b) {
                    for f4 in step(f3, a) {
                        out.push([f1, f2, f3, f4]);
                    }
                }
            }
        }
        out
    };
    let plp = chains(BruhatCell::P, BruhatCell::L);
    let lpl = chains(BruhatCell::L, BruhatCell::P);
    let lpl_set: HashMap<[usize; 4], usize> = lpl.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut hit = vec![false; lpl.len()];
    let mut ok = plp.len() == lpl.len();
    for &[f1, _, _, f4] in &plp {
        let ((p1, _), (p4, _)) = (geom.flags[f1], geom.flags[f4]);
        let image = (p1 != p4).then(|| {
            let m = geom.join(p1, p4);
            [f1, geom.flag(p1, m).unwrap(), geom.flag(p4, m).unwrap(), f4]
        });
        match image.and_then(|c| lpl_set.get(&c)) {
            Some(&i) if !hit[i] => hit[i] = true,
            _ => ok = false,
        }
    }
    YangBaxter { plp_chains: plp.len(), lpl_chains: lpl.len(), bijective: ok && hit.iter().all(|&h| h) }
}

/// `SL(3, q)` for `q ∈ {2, 3}` with its action on flags.
#[derive(Debug, Clone)]
pub struct FlagGroup {
    pub geometry: FlagGeometry,
    pub elements: Vec<Mat>,
    /// `table[g·|X| + f]` is `g·f`.
    table: Vec<u16>,
}

/// Enumerates `SL(3, q)` and tabulates its action on flags.
pub fn build_group(q: u64) -> Result<FlagGroup> {
    if q != 2 && q != 3 {
        return Err(Error::Unsupported(format!("SL(3, {q}); group computations support q = 2 and q = 3")));
    }
    let geometry = enumerate_flags(q)?;
    let f = geometry.field;
    let elements: Vec<Mat> = f.all_matrices(3, 3).filter(|m| f.det(m) == 1).collect();
    let n = geometry.num_flags();
    let mut table = Vec::with_capacity(elements.len() * n);
    for g in &elements {
        let inv = f.inverse(g).expect("determinant 1");
        for &(p, l) in &geometry.flags {
            let v = Mat { rows: 3, cols: 1, data: geometry.points[p].to_vec() };
            let w = Mat { rows: 1, cols: 3, data: geometry.lines[l].to_vec() };
            let gp = f.normalize(&f.mat_mul(g, &v).data);
            let lg = f.normalize(&f.mat_mul(&w, &inv).data);
            let p2 = geometry.point_index[&[gp[0], gp[1], gp[2]]];
            let l2 = geometry.line_index[&[lg[0], lg[1], lg[2]]];
            table.push(geometry.flag(p2, l2).expect("incidence is preserved") as u16);
        }
    }
    Ok(FlagGroup { geometry, elements, table })
}

impl GroupAction for FlagGroup {
    fn group_order(&self) -> usize {
        self.elements.len()
    }

    fn num_points(&self) -> usize {
        self.geometry.num_flags()
    }

    fn act(&self, g: usize, p: usize) -> usize {
        self.table[g * self.geometry.num_flags() + p] as usize
    }
}

impl FlagGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The full multiplication table, `g·h` as matrices. Size-capped, so
    /// available for `q = 2` under the default cap.
    pub fn to_finite_group(&self) -> Result<FiniteGroup> {
        let n = self.elements.len();
        check_size("group multiplication table", (n * n) as u128)?;
        let f = self.geometry.field;
        let index: HashMap<&Mat, usize> = self.elements.iter().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(FiniteGroup::from_fn_unchecked(n, |a, b| index[&f.mat_mul(&self.elements[a], &self.elements[b])]))
    }

    /// Checks that the action maps `P` and `L` to themselves.
    pub fn preserves_relations(&self) -> bool {
        let geom = &self.geometry;
        let n = geom.num_flags();
        (0..self.order()).all(|g| {
            (0..n).all(|a| (0..n).all(|b| geom.cell(a, b) == geom.cell(self.act(g, a), self.act(g, b))))
        })
    }
}

/// The diagonal action on `k`-tuples of points, numbered in mixed radix.
pub struct PowerAction<'a, A: GroupAction> {
    pub base: &'a A,
    pub k: u32,
}

impl<A: GroupAction> PowerAction<'_, A> {
    pub fn encode(&self, parts: &[usize]) -> usize {
        parts.iter().fold(0, |acc, &x| acc * self.base.num_points() + x)
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let n = self.base.num_points();
        let mut out = vec![0; self.k as usize];
        for slot in out.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        out
    }
}

impl<A: GroupAction> GroupAction for PowerAction<'_, A> {
    fn group_order(&self) -> usize {
        self.base.group_order()
    }

    fn num_points(&self) -> usize {
        self.base.num_points().pow(self.k)
    }

    fn act(&self, g: usize, p: usize) -> usize {
        let n = self.base.num_points();
        let (mut out, mut scale, mut rest) = (0, 1, p);
        for _ in 0..self.k {
            out += self.base.act(g, rest % n) * scale;
            rest /= n;
            scale *= n;
        }
        out
    }
}

/// The orbits of `SL(3, q)` on pairs of flags, with their labels.
#[derive(Debug, Clone)]
pub struct BruhatDecomposition {
    pub orbits: Orbits,
    /// Label of each orbit, in orbit order.
    pub cells: Vec<BruhatCell>,
    /// Every pair's geometric label matches the label of its orbit.
    pub consistent: bool,
}

impl BruhatDecomposition {
    pub fn orbit_of_cell(&self, cell: BruhatCell) -> Option<usize> {
        self.cells.iter().position(|&c| c == cell)
    }

    pub fn stabilizer(&self, cell: BruhatCell) -> u64 {
        self.orbit_of_cell(cell).map_or(0, |o| self.orbits.stabilizer_order[o])
    }
}

pub fn bruhat_orbits(group: &FlagGroup) -> BruhatDecomposition {
    let pairs = PowerAction { base: group, k: 2 };
    let orbits = weak_quotient(&pairs);
    let n = group.geometry.num_flags();
    let cells: Vec<BruhatCell> =
        orbits.representative.iter().map(|&r| group.geometry.cell(r / n, r % n)).collect();
    let consistent = (0..n * n).all(|x| group.geometry.cell(x / n, x % n) == cells[orbits.orbit_of[x] as usize]);
    BruhatDecomposition { orbits, cells, consistent }
}

/// The degroupoidified multiplication span of the Hecke algebra, with
/// orbits in the order `e, P, L, PL, LP, PLP`.
///
/// `matrix` has one row per cell and one column per ordered pair of cells
/// (`6i + j` for `(i, j)`). In the basis `b_O = |Stab_O|^(α-1) δ_O` the
/// product has the integer structure constants of the Hecke algebra; at
/// α = 1 the `b_O` are the indicator functions of the orbits.
#[derive(Debug, Clone)]
pub struct HeckeStructure {
    pub q: u64,
    pub alpha: Alpha,
    pub matrix: RationalMatrix,
    pub stabilizers: [u64; 6],
}

impl HeckeStructure {
    /// `b_O` as a vector in the cell basis.
    pub fn basis(&self, cell: BruhatCell) -> Vec<Rational> {
        let k = self.integer_alpha();
        let mut v = vec![int(0); 6];
        v[cell.index()] = pow_i(&int(self.stabilizers[cell.index()]), k - 1);
        v
    }

    fn integer_alpha(&self) -> i64 {
        match self.alpha.kind() {
            Ok(AlphaKind::Integer(k)) => k,
            _ => unreachable!("constructed with integer alpha"),
        }
    }

    /// The bilinear product induced by the span.
    pub fn multiply(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![int(0); 6];
        for i in 0..6 {
            if u[i] == int(0) {
                continue;
            }
            for j in 0..6 {
                if v[j] == int(0) {
                    continue;
                }
                let uv = &u[i] * &v[j];
                for (k, o) in out.iter_mut().enumerate() {
                    *o += self.matrix.get(k, 6 * i + j) * &uv;
                }
            }
        }
        out
    }

    /// `c[i][j][k]`: coefficient of `b_k` in `b_i · b_j`.
    pub fn constants(&self) -> Vec<Vec<Vec<Rational>>> {
        BruhatCell::ALL
            .iter()
            .map(|&a| {
                BruhatCell::ALL
                    .iter()
                    .map(|&b| {
                        let prod = self.multiply(&self.basis(a), &self.basis(b));
                        BruhatCell::ALL.iter().map(|&c| &prod[c.index()] / &self.basis(c)[c.index()]).collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// The quadratic relations for `P` and `L`, the braid relation, and the unit law.
    pub fn relation_checks(&self) -> Vec<RelationCheck> {
        let b = |c| self.basis(c);
        let q = int(self.q as i64);
        let lin = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
            x.iter().zip(y).map(|(a, c)| (&q - int(1)) * a + &q * c).collect()
        };
        let (e, p, l) = (b(BruhatCell::E), b(BruhatCell::P), b(BruhatCell::L));
        let unit = BruhatCell::ALL.iter().all(|&c| {
            self.multiply(&e, &b(c)) == b(c) && self.multiply(&b(c), &e) == b(c)
        });
        vec![
            RelationCheck { name: "P^2 = (q-1)P + q e".into(), passed: self.multiply(&p, &p) == lin(&p, &e) },
            RelationCheck { name: "L^2 = (q-1)L + q e".into(), passed: self.multiply(&l, &l) == lin(&l, &e) },
            RelationCheck {
                name: "PLP = LPL".into(),
                passed: self.multiply(&self.multiply(&p, &l), &p) == self.multiply(&self.multiply(&l, &p), &l),
            },
            RelationCheck { name: "e is the unit".into(), passed: unit },
        ]
    }

    pub fn to_json(&self) -> HeckeJson {
        let labels: Vec<String> = BruhatCell::ALL.iter().map(|c| c.label().to_string()).collect();
        let cols = BruhatCell::ALL
            .iter()
            .flat_map(|a| BruhatCell::ALL.iter().map(move |b| format!("{a}*{b}")))
            .collect();
        let constants = self.constants();
        let mut products = Vec::new();
        for a in BruhatCell::ALL {
            for b in BruhatCell::ALL {
                let terms = BruhatCell::ALL
                    .iter()
                    .filter(|c| constants[a.index()][b.index()][c.index()] != int(0))
                    .map(|c| (c.label().to_string(), to_pq(&constants[a.index()][b.index()][c.index()])))
                    .collect();
                products.push(HeckeProduct { left: a.label().into(), right: b.label().into(), terms });
            }
        }
        HeckeJson {
            q: self.q,
            alpha: self.alpha.to_string(),
            labels: labels.clone(),
            stabilizer_orders: self.stabilizers.to_vec(),
            basis: "b_O = |Stab_O|^(alpha-1) * indicator(O)".into(),
            products,
            matrix: MatrixJson::new(&self.matrix, labels, cols),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HeckeProduct {
    pub left: String,
    pub right: String,
    /// `(label, coefficient)` pairs of the nonzero terms.
    pub terms: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeckeJson {
    pub q: u64,
    pub alpha: String,
    pub labels: Vec<String>,
    pub stabilizer_orders: Vec<u64>,
    pub basis: String,
    pub products: Vec<HeckeProduct>,
    pub matrix: MatrixJson,
}

fn integer_alpha(alpha: &Alpha) -> Result<i64> {
    match alpha.kind()? {
        AlphaKind::Integer(k) => Ok(k),
        AlphaKind::Half(_) => Err(Error::UnsupportedAlpha(format!("{alpha}; Hecke structure constants need integer alpha"))),
    }
}

fn stabilizers(bruhat: &BruhatDecomposition) -> [u64; 6] {
    BruhatCell::ALL.map(|c| bruhat.stabilizer(c))
}

/// Structure constants from the span `X³//G` with legs `(f₁, f₃)` and
/// `((f₁, f₂), (f₂, f₃))`, degroupoidified from orbit data.
pub fn hecke_structure_constants(q: u64, alpha: &Alpha) -> Result<HeckeStructure> {
    integer_alpha(alpha)?;
    let group = build_group(q)?;
    let bruhat = bruhat_orbits(&group);
    let pairs = PowerAction { base: &group, k: 2 };
    let triples = PowerAction { base: &group, k: 3 };
    let n = group.geometry.num_flags();
    let span = EquivariantSpan {
        apex: &triples,
        left: Leg { factors: vec![&pairs], map: Box::new(move |t| vec![(t / (n * n)) * n + t % n]) },
        right: Leg {
            factors: vec![&pairs, &pairs],
            map: Box::new(move |t| vec![t / n, t % (n * n)]),
        },
    };
    let raw = degroupoidify_equivariant(&span, alpha)?;
    // reorder rows and columns from orbit order to cell order
    let orbit = |c: BruhatCell| bruhat.orbit_of_cell(c).expect("all six cells occur");
    let matrix = RationalMatrix::from_fn(6, 36, |k, col| {
        let (i, j) = (BruhatCell::ALL[col / 6], BruhatCell::ALL[col % 6]);
        let raw_col = orbit(i) * raw.cols.factors[1].num_orbits() + orbit(j);
        raw.matrix.get(orbit(BruhatCell::ALL[k]), raw_col).clone()
    });
    Ok(HeckeStructure { q, alpha: alpha.clone(), matrix, stabilizers: stabilizers(&bruhat) })
}

/// The same matrix computed by materializing the action groupoid of the
/// triples in the given blocks `(cell of (f₁,f₂), cell of (f₂,f₃))` and
/// degroupoidifying an ordinary span of groupoids into the skeleton of
/// `X²//G`. Only the columns of the chosen blocks are filled.
pub fn hecke_structure_materialized(q: u64, alpha: &Alpha, blocks: &[(BruhatCell, BruhatCell)]) -> Result<RationalMatrix> {
    integer_alpha(alpha)?;
    let group = build_group(q)?;
    let finite = Arc::new(group.to_finite_group()?);
    let bruhat = bruhat_orbits(&group);
    let geom = &group.geometry;
    let n = geom.num_flags();
    let pairs = PowerAction { base: &group, k: 2 };

    let mut triples = Vec::new();
    for f1 in 0..n {
        for f2 in 0..n {
            for f3 in 0..n {
                if blocks.contains(&(geom.cell(f1, f2), geom.cell(f2, f3))) {
                    triples.push([f1, f2, f3]);
                }
            }
        }
    }
    let index: HashMap<[usize; 3], usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let apex_action = TableAction::from_fn_unchecked(finite.clone(), triples.len(), |g, t| {
        let [a, b, c] = triples[t];
        index[&[group.act(g, a), group.act(g, b), group.act(g, c)]]
    });
    let apex = Arc::new(materialize(&apex_action)?);

    // skeleton of X²//G: one object per cell, automorphisms the stabilizer of its representative
    let stab: Vec<Vec<usize>> = BruhatCell::ALL
        .iter()
        .map(|&c| {
            let rep = bruhat.orbits.representative[bruhat.orbit_of_cell(c).unwrap()];
            (0..finite.order()).filter(|&g| pairs.act(g, rep) == rep).collect()
        })
        .collect();
    let mut offset = Vec::new();
    let mut ends = Vec::new();
    for (c, s) in stab.iter().enumerate() {
        offset.push(ends.len());
        ends.extend(std::iter::repeat((c, c)).take(s.len()));
    }
    let position: Vec<HashMap<usize, usize>> =
        stab.iter().map(|s| s.iter().enumerate().map(|(i, &g)| (g, i)).collect()).collect();
    let owner: Vec<usize> = ends.iter().map(|e| e.0).collect();
    let element = |m: usize| stab[owner[m]][m - offset[owner[m]]];
    let mor = |c: usize, g: usize| offset[c] + position[c][&g];
    let identity: Vec<usize> = (0..6).map(|c| mor(c, finite.identity())).collect();
    let inverse: Vec<usize> = (0..ends.len()).map(|m| mor(owner[m], finite.inverse(element(m)))).collect();
    let skeleton = Arc::new(FiniteGroupoid::from_table_fn(6, &ends, &identity, &inverse, |f, h| {
        mor(owner[f], finite.mul(element(h), element(f)))
    })?);

    // x = τ_x · rep; the morphism g: x -> g·x goes to τ_{g·x}⁻¹ g τ_x
    let cell_of = |x: usize| bruhat.cells[bruhat.orbits.orbit_of[x] as usize].index();
    let to_skeleton = |x: usize, g: usize| {
        let gx = pairs.act(g, x);
        let t = |y: usize| bruhat.orbits.transporter[y] as usize;
        mor(cell_of(x), finite.mul(finite.mul(finite.inverse(t(gx)), g), t(x)))
    };
    let order = finite.order();
    let outer = |t: usize| pairs.encode(&[triples[t][0], triples[t][2]]);
    let first = |t: usize| pairs.encode(&[triples[t][0], triples[t][1]]);
    let second = |t: usize| pairs.encode(&[triples[t][1], triples[t][2]]);
    let apex_objects = 0..apex.num_objects();
    let apex_morphisms = 0..apex.num_morphisms();
    let left = GroupoidFunctor::new_unchecked(
        apex.clone(),
        skeleton.clone(),
        apex_objects.clone().map(|t| cell_of(outer(t))).collect(),
        apex_morphisms.clone().map(|m| to_skeleton(outer(m / order), m % order)).collect(),
    );
    let square = product(&skeleton, &skeleton).groupoid;
    let k = skeleton.num_morphisms();
    let right = GroupoidFunctor::new_unchecked(
        apex.clone(),
        square,
        apex_objects.map(|t| cell_of(first(t)) * 6 + cell_of(second(t))).collect(),
        apex_morphisms
            .map(|m| {
                let (t, g) = (m / order, m % order);
                to_skeleton(first(t), g) * k + to_skeleton(second(t), g)
            })
            .collect(),
    );
    let span = SpanOfGroupoids::new(left, right)?;
    degroupoidify_span(&span, alpha)
}

/// Independent count: `c^k_ij` is the number of flags `f₂` with
/// `(f₁, f₂)` in cell `i` and `(f₂, f₃)` in cell `j`, for a fixed pair
/// `(f₁, f₃)` in cell `k`; stabilizer orders come from `|SL(3, q)|` and the
/// number of pairs in each cell. Returns the matrix the span should give.
pub fn hecke_structure_by_counting(q: u64, alpha: &Alpha) -> Result<RationalMatrix> {
    let a = integer_alpha(alpha)?;
    let geom = enumerate_flags(q)?;
    let n = geom.num_flags();
    let group_order = q.pow(3) * (q.pow(3) - 1) * (q.pow(2) - 1) / if q % 3 == 1 { 3 } else { 1 };
    let mut size = [0u64; 6];
    let mut rep = [None; 6];
    for f in 0..n {
        for g in 0..n {
            let c = geom.cell(f, g).index();
            size[c] += 1;
            rep[c].get_or_insert((f, g));
        }
    }
    let stab: Vec<Rational> = size.iter().map(|&s| Rational::new(group_order.into(), s.into())).collect();
    let mut m = RationalMatrix::zeros(6, 36);
    for k in 0..6 {
        let (f1, f3) = rep[k].expect("every cell is nonempty");
        for f2 in 0..n {
            let (i, j) = (geom.cell(f1, f2).index(), geom.cell(f2, f3).index());
            let w = pow_i(&(&stab[i] * &stab[j]), 1 - a) * pow_i(&stab[k], a - 1);
            m.add_at(k, 6 * i + j, &w);
        }
    }
    Ok(m)
}
