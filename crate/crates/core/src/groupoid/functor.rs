use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{to_u32, FiniteGroupoid, GroupoidRef};
use crate::error::{Error, Result};

/// JSON interchange form of a functor; domain and codomain are supplied by
/// the surrounding document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorData {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct GroupoidFunctor {
    domain: GroupoidRef,
    codomain: GroupoidRef,
    object_map: Vec<u32>,
    morphism_map: Vec<u32>,
}

impl GroupoidFunctor {
    /// Checked constructor: rejects maps that break endpoints, identities
    /// or composites.
    pub fn new(
        domain: GroupoidRef,
        codomain: GroupoidRef,
        object_map: Vec<usize>,
        morphism_map: Vec<usize>,
    ) -> Result<Self> {
        let f = Self::new_unchecked(domain, codomain, object_map, morphism_map);
        let problems = f.validate();
        if let Some(first) = problems.into_iter().next() {
            return Err(Error::InvalidFunctor(first));
        }
        Ok(f)
    }

    pub fn new_unchecked(
        domain: GroupoidRef,
        codomain: GroupoidRef,
        object_map: Vec<usize>,
        morphism_map: Vec<usize>,
    ) -> Self {
        GroupoidFunctor {
            domain,
            codomain,
            object_map: object_map.into_iter().map(to_u32).collect(),
            morphism_map: morphism_map.into_iter().map(to_u32).collect(),
        }
    }

    pub fn from_data(domain: GroupoidRef, codomain: GroupoidRef, data: &FunctorData) -> Result<Self> {
        Self::new(domain, codomain, data.objects.clone(), data.morphisms.clone())
    }

    pub fn to_data(&self) -> FunctorData {
        FunctorData {
            objects: self.object_map.iter().map(|&i| i as usize).collect(),
            morphisms: self.morphism_map.iter().map(|&i| i as usize).collect(),
        }
    }

    pub fn identity(g: &GroupoidRef) -> Self {
        Self::new_unchecked(
            g.clone(),
            g.clone(),
            (0..g.num_objects()).collect(),
            (0..g.num_morphisms()).collect(),
        )
    }

    /// Sends everything to the single object of a fresh terminal groupoid.
    pub fn to_terminal(g: &GroupoidRef) -> Self {
        Self::new_unchecked(
            g.clone(),
            Arc::new(FiniteGroupoid::terminal()),
            vec![0; g.num_objects()],
            vec![0; g.num_morphisms()],
        )
    }

    pub fn domain(&self) -> &GroupoidRef {
        &self.domain
    }

    pub fn codomain(&self) -> &GroupoidRef {
        &self.codomain
    }

    pub fn object(&self, x: usize) -> usize {
        self.object_map[x] as usize
    }

    pub fn morphism(&self, m: usize) -> usize {
        self.morphism_map[m] as usize
    }

    /// `self`, then `next`.
    pub fn then(&self, next: &GroupoidFunctor) -> Result<GroupoidFunctor> {
        if !self.codomain.same_as(&next.domain) {
            return Err(Error::Domain("functors are not composable".into()));
        }
        Ok(GroupoidFunctor {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            object_map: self.object_map.iter().map(|&x| next.object_map[x as usize]).collect(),
            morphism_map: self.morphism_map.iter().map(|&m| next.morphism_map[m as usize]).collect(),
        })
    }

    /// Lists every broken functor law; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let (d, c) = (&self.domain, &self.codomain);
        let mut problems = Vec::new();
        if self.object_map.len() != d.num_objects() || self.morphism_map.len() != d.num_morphisms() {
            problems.push("map lengths do not match the domain".to_string());
            return problems;
        }
        if let Some(x) = self.object_map.iter().position(|&y| y as usize >= c.num_objects()) {
            problems.push(format!("object {x} maps outside the codomain"));
        }
        if let Some(m) = self.morphism_map.iter().position(|&y| y as usize >= c.num_morphisms()) {
            problems.push(format!("morphism {m} maps outside the codomain"));
        }
        if !problems.is_empty() {
            return problems;
        }
        for m in 0..d.num_morphisms() {
            let fm = self.morphism(m);
            if c.source(fm) != self.object(d.source(m)) || c.target(fm) != self.object(d.target(m)) {
                problems.push(format!("morphism {m} maps to {fm} with mismatched endpoints"));
            }
        }
        for x in 0..d.num_objects() {
            if self.morphism(d.identity(x)) != c.identity(self.object(x)) {
                problems.push(format!("identity of object {x} is not preserved"));
            }
        }
        if !problems.is_empty() {
            return problems;
        }
        'outer: for f in 0..d.num_morphisms() {
            for g in d.out_of(d.target(f)) {
                let lhs = self.morphism(d.compose_unchecked(f, g));
                let rhs = c.compose_unchecked(self.morphism(f), self.morphism(g));
                if lhs != rhs {
                    problems.push(format!("composite of {f} and {g} is not preserved"));
                    break 'outer;
                }
            }
        }
        problems
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::FiniteGroup;

    #[test]
    fn rejects_non_functor() {
        let z2 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let z3 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)));
        // no nontrivial homomorphism Z/2 -> Z/3
        assert!(GroupoidFunctor::new(z2.clone(), z3.clone(), vec![0], vec![0, 1]).is_err());
        assert!(GroupoidFunctor::new(z2, z3, vec![0], vec![0, 0]).is_ok());
    }

    #[test]
    fn composition_of_functors() {
        let g = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(4)));
        let id = GroupoidFunctor::identity(&g);
        let bang = GroupoidFunctor::to_terminal(&g);
        let comp = id.then(&bang).unwrap();
        assert!(comp.validate().is_empty());
        assert_eq!(comp.codomain().num_objects(), 1);
    }
}
