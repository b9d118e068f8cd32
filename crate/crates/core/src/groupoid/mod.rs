//! Explicit finite groupoids.
//!
//! A [`FiniteGroupoid`] stores its objects and morphisms as dense index
//! tables. Composition is either a dense table over composable pairs or, for
//! structured groupoids whose table would be huge (action groupoids,
//! permutation groupoids, products), a rule evaluated on demand. Both forms
//! behave identically through the public API.
//!
//! Composition is written in diagrammatic order: `compose(f, g)` is "`f`,
//! then `g`" and is defined exactly when `target(f) == source(g)`.

mod classes;
mod functor;
mod ops;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::config::check_size;
use crate::error::{Error, Result};
use crate::rational::{recip, Rational};

pub use classes::IsoClassTable;
pub use functor::{FunctorData, GroupoidFunctor};
pub use ops::{
    check_equivalence_certificate, coproduct, equivalence_report, full_inverse_image, full_subgroupoid, product,
    skeleton, skeleton_retraction, Coproduct, EquivalenceReport, Product,
};
pub use validate::{validate_groupoid, Axiom, ValidationReport, Violation};

pub type GroupoidRef = Arc<FiniteGroupoid>;

const NONE: u32 = u32::MAX;

type Rule = Arc<dyn Fn(usize, usize) -> usize + Send + Sync>;

#[derive(Clone)]
enum Composition {
    /// `table[offsets[f] + out_pos[g]]` holds `compose(f, g)`.
    Table { offsets: Vec<usize>, table: Vec<u32> },
    Rule(Rule),
}

/// JSON interchange form. All indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidData {
    pub objects: usize,
    pub morphisms: Vec<MorphismData>,
    pub identity: Vec<usize>,
    pub compose: Vec<[usize; 3]>,
    pub inverse: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismData {
    pub src: usize,
    pub tgt: usize,
}

#[derive(Clone)]
pub struct FiniteGroupoid {
    num_objects: usize,
    source: Vec<u32>,
    target: Vec<u32>,
    identity: Vec<u32>,
    inverse: Vec<u32>,
    out_of: Vec<Vec<u32>>,
    out_pos: Vec<u32>,
    composition: Composition,
    classes: OnceLock<IsoClassTable>,
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroupoid")
            .field("objects", &self.num_objects)
            .field("morphisms", &self.source.len())
            .finish()
    }
}

fn to_u32(v: usize) -> u32 {
    u32::try_from(v).expect("index exceeds u32 range")
}

impl FiniteGroupoid {
    fn skeleton_parts(
        num_objects: usize,
        ends: &[(usize, usize)],
        identity: &[usize],
        inverse: &[usize],
    ) -> Self {
        assert_eq!(identity.len(), num_objects);
        assert_eq!(inverse.len(), ends.len());
        let mut out_of = vec![Vec::new(); num_objects];
        let mut out_pos = Vec::with_capacity(ends.len());
        for (m, &(s, _)) in ends.iter().enumerate() {
            out_pos.push(to_u32(out_of[s].len()));
            out_of[s].push(to_u32(m));
        }
        FiniteGroupoid {
            num_objects,
            source: ends.iter().map(|e| to_u32(e.0)).collect(),
            target: ends.iter().map(|e| to_u32(e.1)).collect(),
            identity: identity.iter().map(|&i| to_u32(i)).collect(),
            inverse: inverse.iter().map(|&i| to_u32(i)).collect(),
            out_of,
            out_pos,
            composition: Composition::Rule(Arc::new(|_, _| unreachable!())),
            classes: OnceLock::new(),
        }
    }

    /// Builds a groupoid with a dense composition table filled from
    /// `compose`, which is called once per composable pair. The axioms are
    /// not checked; use [`FiniteGroupoid::validate`] when in doubt.
    pub fn from_table_fn(
        num_objects: usize,
        ends: &[(usize, usize)],
        identity: &[usize],
        inverse: &[usize],
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let mut g = Self::skeleton_parts(num_objects, ends, identity, inverse);
        let pairs: u128 = ends.iter().map(|&(_, t)| g.out_of[t].len() as u128).sum();
        check_size("composition table", pairs)?;
        let mut offsets = Vec::with_capacity(ends.len());
        let mut table = Vec::with_capacity(pairs as usize);
        for (f, &(_, t)) in ends.iter().enumerate() {
            offsets.push(table.len());
            for &h in &g.out_of[t] {
                table.push(to_u32(compose(f, h as usize)));
            }
        }
        g.composition = Composition::Table { offsets, table };
        Ok(g)
    }

    /// Builds a groupoid whose composition is evaluated by `rule` on demand.
    pub fn from_rule(
        num_objects: usize,
        ends: &[(usize, usize)],
        identity: &[usize],
        inverse: &[usize],
        rule: impl Fn(usize, usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        let mut g = Self::skeleton_parts(num_objects, ends, identity, inverse);
        g.composition = Composition::Rule(Arc::new(rule));
        g
    }

    /// Parses and validates interchange data.
    pub fn from_data(data: &GroupoidData) -> Result<Self> {
        let report = validate_groupoid(data);
        if !report.is_valid() {
            return Err(Error::InvalidGroupoid(report));
        }
        let lookup: HashMap<(usize, usize), usize> =
            data.compose.iter().map(|&[f, g, h]| ((f, g), h)).collect();
        let ends: Vec<_> = data.morphisms.iter().map(|m| (m.src, m.tgt)).collect();
        Self::from_table_fn(data.objects, &ends, &data.identity, &data.inverse, |f, g| {
            lookup[&(f, g)]
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: GroupoidData = serde_json::from_str(text)?;
        Self::from_data(&data)
    }

    pub fn to_data(&self) -> GroupoidData {
        let mut compose = Vec::new();
        for f in 0..self.num_morphisms() {
            for &g in &self.out_of[self.target(f)] {
                let g = g as usize;
                compose.push([f, g, self.compose_unchecked(f, g)]);
            }
        }
        GroupoidData {
            objects: self.num_objects,
            morphisms: (0..self.num_morphisms())
                .map(|m| MorphismData { src: self.source(m), tgt: self.target(m) })
                .collect(),
            identity: self.identity.iter().map(|&i| i as usize).collect(),
            compose,
            inverse: self.inverse.iter().map(|&i| i as usize).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_data()).expect("groupoid data serializes")
    }

    pub fn empty() -> Self {
        Self::from_rule(0, &[], &[], &[], |_, _| unreachable!())
    }

    /// One object, one morphism.
    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    /// `n` objects and only identity morphisms; the groupoid of an `n`-element set.
    pub fn discrete(n: usize) -> Self {
        let ends: Vec<_> = (0..n).map(|i| (i, i)).collect();
        let ids: Vec<_> = (0..n).collect();
        Self::from_rule(n, &ends, &ids, &ids, |f, _| f)
    }

    pub fn num_objects(&self) -> usize {
        self.num_objects
    }

    pub fn num_morphisms(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num_objects == 0
    }

    pub fn source(&self, m: usize) -> usize {
        self.source[m] as usize
    }

    pub fn target(&self, m: usize) -> usize {
        self.target[m] as usize
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x] as usize
    }

    pub fn inverse(&self, m: usize) -> usize {
        self.inverse[m] as usize
    }

    /// `f` then `g`, or `None` when they are not composable.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        (self.target[f] == self.source[g]).then(|| self.compose_unchecked(f, g))
    }

    /// Caller guarantees `target(f) == source(g)`.
    pub fn compose_unchecked(&self, f: usize, g: usize) -> usize {
        match &self.composition {
            Composition::Table { offsets, table } => {
                let h = table[offsets[f] + self.out_pos[g] as usize];
                debug_assert_ne!(h, NONE);
                h as usize
            }
            Composition::Rule(rule) => rule(f, g),
        }
    }

    /// Morphisms with source `x`, ascending.
    pub fn out_of(&self, x: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.out_of[x].iter().map(|&m| m as usize)
    }

    /// Position of `m` within `out_of(source(m))`.
    pub fn out_position(&self, m: usize) -> usize {
        self.out_pos[m] as usize
    }

    pub fn out_degree(&self, x: usize) -> usize {
        self.out_of[x].len()
    }

    pub fn hom(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_of(x).filter(move |&m| self.target(m) == y)
    }

    pub fn endomorphisms(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.hom(x, x)
    }

    pub fn iso_classes(&self) -> &IsoClassTable {
        self.classes.get_or_init(|| IsoClassTable::compute(self))
    }

    /// `Σ_[x] 1/|Aut(x)|`.
    pub fn cardinality(&self) -> Rational {
        self.iso_classes().aut_order.iter().map(|&a| recip(a)).sum()
    }

    /// `Σ_x 1/|Mor(x, -)|`, summed over every object rather than over classes.
    pub fn cardinality_alt(&self) -> Rational {
        (0..self.num_objects).map(|x| recip(self.out_degree(x) as u64)).sum()
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate_tables(
            self.num_objects,
            &self.source,
            &self.target,
            &self.identity,
            &self.inverse,
            |f, g| Some(self.compose_unchecked(f, g)),
            |x| self.out_of(x).collect(),
        )
    }

    /// Same object and morphism tables and the same composition.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        if Arc::ptr_eq(self, other) {
            return true;
        }
        self.num_objects == other.num_objects
            && self.source == other.source
            && self.target == other.target
            && self.identity == other.identity
            && self.inverse == other.inverse
            && (0..self.num_morphisms()).all(|f| {
                self.out_of(self.target(f))
                    .all(|g| self.compose_unchecked(f, g) == other.compose_unchecked(f, g))
            })
    }
}
