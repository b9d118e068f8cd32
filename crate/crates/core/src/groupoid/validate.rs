use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::GroupoidData;

/// Stop collecting associativity failures after this many; one witness is
/// usually enough and the triple count can be large.
const MAX_ASSOCIATIVITY_REPORTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    IndexRange,
    IdentityEndpoints,
    InverseEndpoints,
    Composability,
    ConflictingComposite,
    MissingComposite,
    CompositeEndpoints,
    UnitLaw,
    InverseLaw,
    Associativity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    /// Witnessing object/morphism indices, in the order `detail` mentions them.
    pub indices: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    fn push(&mut self, axiom: Axiom, indices: Vec<usize>, detail: String) {
        self.violations.push(Violation { axiom, indices, detail });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}: {}", v.axiom, v.detail)?;
        }
        Ok(())
    }
}

/// Checks raw interchange data against every groupoid axiom. Violations are
/// returned as data; this never fails.
pub fn validate_groupoid(data: &GroupoidData) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n_obj = data.objects;
    let n_mor = data.morphisms.len();

    for (m, md) in data.morphisms.iter().enumerate() {
        if md.src >= n_obj || md.tgt >= n_obj {
            report.push(Axiom::IndexRange, vec![m], format!("morphism {m} has an endpoint outside 0..{n_obj}"));
        }
    }
    if data.identity.len() != n_obj {
        report.push(Axiom::IndexRange, vec![], format!("identity table has {} entries for {n_obj} objects", data.identity.len()));
    }
    if data.inverse.len() != n_mor {
        report.push(Axiom::IndexRange, vec![], format!("inverse table has {} entries for {n_mor} morphisms", data.inverse.len()));
    }
    for (x, &m) in data.identity.iter().enumerate() {
        if m >= n_mor {
            report.push(Axiom::IndexRange, vec![x, m], format!("identity of object {x} is morphism {m}, out of range"));
        }
    }
    for (f, &m) in data.inverse.iter().enumerate() {
        if m >= n_mor {
            report.push(Axiom::IndexRange, vec![f, m], format!("inverse of morphism {f} is {m}, out of range"));
        }
    }
    for &[f, g, h] in &data.compose {
        if f >= n_mor || g >= n_mor || h >= n_mor {
            report.push(Axiom::IndexRange, vec![f, g, h], format!("compose entry [{f}, {g}, {h}] is out of range"));
        }
    }
    if !report.is_valid() {
        return report;
    }

    let source: Vec<u32> = data.morphisms.iter().map(|m| m.src as u32).collect();
    let target: Vec<u32> = data.morphisms.iter().map(|m| m.tgt as u32).collect();
    let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
    for &[f, g, h] in &data.compose {
        if target[f] != source[g] {
            report.push(
                Axiom::Composability,
                vec![f, g],
                format!("compose({f}, {g}) is defined but target({f}) = {} differs from source({g}) = {}", target[f], source[g]),
            );
            continue;
        }
        if let Some(&prev) = lookup.get(&(f, g)) {
            if prev != h {
                report.push(Axiom::ConflictingComposite, vec![f, g, prev, h], format!("compose({f}, {g}) is given as both {prev} and {h}"));
            }
            continue;
        }
        lookup.insert((f, g), h);
    }

    let mut out_of = vec![Vec::new(); n_obj];
    for (m, &s) in source.iter().enumerate() {
        out_of[s as usize].push(m);
    }
    let identity: Vec<u32> = data.identity.iter().map(|&i| i as u32).collect();
    let inverse: Vec<u32> = data.inverse.iter().map(|&i| i as u32).collect();
    let rest = validate_tables(
        n_obj,
        &source,
        &target,
        &identity,
        &inverse,
        |f, g| lookup.get(&(f, g)).copied(),
        |x| out_of[x].clone(),
    );
    report.violations.extend(rest.violations);
    report
}

pub(super) fn validate_tables(
    n_obj: usize,
    source: &[u32],
    target: &[u32],
    identity: &[u32],
    inverse: &[u32],
    compose: impl Fn(usize, usize) -> Option<usize>,
    out_of: impl Fn(usize) -> Vec<usize>,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let src = |m: usize| source[m] as usize;
    let tgt = |m: usize| target[m] as usize;

    for x in 0..n_obj {
        let i = identity[x] as usize;
        if src(i) != x || tgt(i) != x {
            report.push(Axiom::IdentityEndpoints, vec![x, i], format!("identity {i} of object {x} runs {} -> {}", src(i), tgt(i)));
        }
    }
    for f in 0..source.len() {
        let inv = inverse[f] as usize;
        if src(inv) != tgt(f) || tgt(inv) != src(f) {
            report.push(Axiom::InverseEndpoints, vec![f, inv], format!("inverse {inv} of morphism {f} does not reverse its endpoints"));
        }
    }
    if !report.is_valid() {
        return report;
    }

    let outs: Vec<Vec<usize>> = (0..n_obj).map(&out_of).collect();
    let mut total = true;
    for f in 0..source.len() {
        for &g in &outs[tgt(f)] {
            match compose(f, g) {
                None => {
                    total = false;
                    report.push(Axiom::MissingComposite, vec![f, g], format!("compose({f}, {g}) is undefined"));
                }
                Some(h) if src(h) != src(f) || tgt(h) != tgt(g) => {
                    total = false;
                    report.push(Axiom::CompositeEndpoints, vec![f, g, h], format!("compose({f}, {g}) = {h} has the wrong endpoints"));
                }
                Some(_) => {}
            }
        }
    }
    let is = |a: Option<usize>, b: usize| a == Some(b);
    for f in 0..source.len() {
        let (s, t) = (src(f), tgt(f));
        if !is(compose(identity[s] as usize, f), f) || !is(compose(f, identity[t] as usize), f) {
            report.push(Axiom::UnitLaw, vec![f], format!("identities are not units for morphism {f}"));
        }
        let inv = inverse[f] as usize;
        if !is(compose(f, inv), identity[s] as usize) || !is(compose(inv, f), identity[t] as usize) {
            report.push(Axiom::InverseLaw, vec![f, inv], format!("{inv} is not a two-sided inverse of {f}"));
        }
    }
    if !total {
        return report;
    }

    let mut reported = 0;
    'outer: for f in 0..source.len() {
        for &g in &outs[tgt(f)] {
            let fg = compose(f, g).unwrap();
            for &h in &outs[tgt(g)] {
                let left = compose(fg, h).unwrap();
                let right = compose(f, compose(g, h).unwrap()).unwrap();
                if left != right {
                    report.push(Axiom::Associativity, vec![f, g, h], format!("(({f} {g}) {h}) = {left} but ({f} ({g} {h})) = {right}"));
                    reported += 1;
                    if reported >= MAX_ASSOCIATIVITY_REPORTS {
                        break 'outer;
                    }
                }
            }
        }
    }
    report
}
