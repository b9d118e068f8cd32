//! Spans of finite groupoids and their degroupoidification.
//!
//! A span `X <-p- S -q-> Y` is stored with `left = q: S -> Y` and
//! `right = p: S -> X`, so that it acts from `X` to `Y`. Its matrix has rows
//! indexed by the iso classes of `Y` and columns by those of `X`.

mod alpha;
mod degroupoidify;
mod pullback;
mod trace;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{
    coproduct, product, FiniteGroupoid, FunctorData, GroupoidData, GroupoidFunctor, GroupoidRef,
};

pub use alpha::{alpha_weight, surd_weight, vector_weight, vector_weight_surd, Alpha, AlphaKind};
pub use degroupoidify::{
    degroupoidify_span, degroupoidify_span_surd, degroupoidify_span_via_pullback, degroupoidify_vector,
    degroupoidify_vector_surd,
};
pub use pullback::{pullback_with, weak_pullback, weak_pullback_reduced, PullbackMode, WeakPullback};
pub use trace::{inner_product, inner_product_formula, trace_groupoid_literal, trace_span};

/// A span from `X` (the codomain of `right`) to `Y` (the codomain of `left`).
#[derive(Debug, Clone)]
pub struct SpanOfGroupoids {
    pub apex: GroupoidRef,
    pub left: GroupoidFunctor,
    pub right: GroupoidFunctor,
}

/// A groupoid `Ψ` with a functor `Ψ -> X`.
#[derive(Debug, Clone)]
pub struct GroupoidOverX {
    pub total: GroupoidRef,
    pub projection: GroupoidFunctor,
}

impl GroupoidOverX {
    pub fn new(projection: GroupoidFunctor) -> Self {
        GroupoidOverX { total: projection.domain().clone(), projection }
    }

    pub fn base(&self) -> &GroupoidRef {
        self.projection.codomain()
    }

    /// `X` over itself by the identity.
    pub fn identity(x: &GroupoidRef) -> Self {
        Self::new(GroupoidFunctor::identity(x))
    }
}

impl SpanOfGroupoids {
    pub fn new(left: GroupoidFunctor, right: GroupoidFunctor) -> Result<Self> {
        if !left.domain().same_as(right.domain()) {
            return Err(Error::Domain("span legs have different domains".into()));
        }
        let apex = left.domain().clone();
        Ok(SpanOfGroupoids { apex, left, right })
    }

    /// The groupoid the span acts on.
    pub fn source(&self) -> &GroupoidRef {
        self.right.codomain()
    }

    /// The groupoid the span lands in.
    pub fn target(&self) -> &GroupoidRef {
        self.left.codomain()
    }

    /// Checks both legs as functors.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = self.left.validate();
        problems.extend(self.right.validate().into_iter().map(|p| format!("right leg: {p}")));
        problems
    }

    pub fn to_data(&self) -> SpanData {
        SpanData {
            apex: self.apex.to_data(),
            left: self.left.to_data(),
            right: self.right.to_data(),
            source: self.source().to_data(),
            target: self.target().to_data(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_data()).expect("span data serializes")
    }

    /// Parses a span; when `source` and `target` are equal they become the
    /// same groupoid, so the span can be composed with itself.
    pub fn from_data(data: &SpanData) -> Result<Self> {
        let apex = Arc::new(FiniteGroupoid::from_data(&data.apex)?);
        let source = Arc::new(FiniteGroupoid::from_data(&data.source)?);
        let target = if data.target == data.source {
            source.clone()
        } else {
            Arc::new(FiniteGroupoid::from_data(&data.target)?)
        };
        let left = GroupoidFunctor::from_data(apex.clone(), target, &data.left)?;
        let right = GroupoidFunctor::from_data(apex, source, &data.right)?;
        Self::new(left, right)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: SpanData = serde_json::from_str(text)?;
        Self::from_data(&data)
    }
}

/// JSON form: the apex, both legs, and the groupoids `X` (`source`) and
/// `Y` (`target`) the legs point into.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanData {
    pub apex: GroupoidData,
    pub left: FunctorData,
    pub right: FunctorData,
    pub source: GroupoidData,
    pub target: GroupoidData,
}

/// `X <-id- X -id-> X`.
pub fn identity_span(x: &GroupoidRef) -> SpanOfGroupoids {
    let id = GroupoidFunctor::identity(x);
    SpanOfGroupoids { apex: x.clone(), left: id.clone(), right: id }
}

/// The composite `t ∘ s`: first `s: X -> Y`, then `t: Y -> Z`.
pub fn compose_spans(t: &SpanOfGroupoids, s: &SpanOfGroupoids) -> Result<SpanOfGroupoids> {
    compose_spans_with(PullbackMode::Reduced, t, s)
}

/// [`compose_spans`] through the literal weak pullback.
pub fn compose_spans_literal(t: &SpanOfGroupoids, s: &SpanOfGroupoids) -> Result<SpanOfGroupoids> {
    compose_spans_with(PullbackMode::Literal, t, s)
}

pub fn compose_spans_with(mode: PullbackMode, t: &SpanOfGroupoids, s: &SpanOfGroupoids) -> Result<SpanOfGroupoids> {
    if !s.target().same_as(t.source()) {
        return Err(Error::Domain("spans are not composable: middle groupoids differ".into()));
    }
    let p = pullback_with(mode, &s.left, &t.right)?;
    Ok(SpanOfGroupoids {
        apex: p.groupoid,
        left: p.to_second.then(&t.left)?,
        right: p.to_first.then(&s.right)?,
    })
}

/// The functor out of a coproduct that is `f` on the first summand and `g`
/// on the second.
fn copair(f: &GroupoidFunctor, g: &GroupoidFunctor, sum: &GroupoidRef) -> GroupoidFunctor {
    let objects = |h: &GroupoidFunctor| (0..h.domain().num_objects()).map(|x| h.object(x)).collect::<Vec<_>>();
    let morphisms = |h: &GroupoidFunctor| (0..h.domain().num_morphisms()).map(|m| h.morphism(m)).collect::<Vec<_>>();
    let (mut fo, mut fm) = (objects(f), morphisms(f));
    fo.extend(objects(g));
    fm.extend(morphisms(g));
    GroupoidFunctor::new_unchecked(sum.clone(), f.codomain().clone(), fo, fm)
}

fn check_parallel(s: &SpanOfGroupoids, t: &SpanOfGroupoids) -> Result<()> {
    if !s.source().same_as(t.source()) || !s.target().same_as(t.target()) {
        return Err(Error::Domain("spans have different endpoints".into()));
    }
    Ok(())
}

/// `s + t`, with apex the disjoint union of the apexes.
pub fn add_spans(s: &SpanOfGroupoids, t: &SpanOfGroupoids) -> Result<SpanOfGroupoids> {
    check_parallel(s, t)?;
    let sum = coproduct(&s.apex, &t.apex).groupoid;
    Ok(SpanOfGroupoids {
        left: copair(&s.left, &t.left, &sum),
        right: copair(&s.right, &t.right, &sum),
        apex: sum,
    })
}

/// `λ × s`: apex `λ × S` with the legs of `s` on the second factor.
pub fn scalar_mul(lambda: &GroupoidRef, s: &SpanOfGroupoids) -> Result<SpanOfGroupoids> {
    let p = product(lambda, &s.apex);
    Ok(SpanOfGroupoids { apex: p.groupoid, left: p.snd.then(&s.left)?, right: p.snd.then(&s.right)? })
}

/// Multiplication by the natural number `n`, via the discrete groupoid on `n` objects.
pub fn scalar_mul_int(n: usize, s: &SpanOfGroupoids) -> Result<SpanOfGroupoids> {
    scalar_mul(&Arc::new(FiniteGroupoid::discrete(n)), s)
}

/// The span read backwards.
pub fn adjoint(s: &SpanOfGroupoids) -> SpanOfGroupoids {
    SpanOfGroupoids { apex: s.apex.clone(), left: s.right.clone(), right: s.left.clone() }
}

/// `f × g` between products, given both products.
fn functor_product(
    f: &GroupoidFunctor,
    g: &GroupoidFunctor,
    domain: &GroupoidRef,
    codomain: &GroupoidRef,
) -> GroupoidFunctor {
    let (go, gm) = (g.domain().num_objects(), g.domain().num_morphisms());
    let (co, cm) = (g.codomain().num_objects(), g.codomain().num_morphisms());
    let objects = (0..domain.num_objects()).map(|x| f.object(x / go) * co + g.object(x % go)).collect();
    let morphisms = (0..domain.num_morphisms()).map(|m| f.morphism(m / gm) * cm + g.morphism(m % gm)).collect();
    GroupoidFunctor::new_unchecked(domain.clone(), codomain.clone(), objects, morphisms)
}

/// `s ⊗ s'` from `X × X'` to `Y × Y'`. Classes of a product are ordered as
/// in [`crate::groupoid::product`], so the matrix is the Kronecker product.
pub fn tensor_spans(s: &SpanOfGroupoids, s2: &SpanOfGroupoids) -> SpanOfGroupoids {
    let apex = product(&s.apex, &s2.apex).groupoid;
    let y = product(s.target(), s2.target()).groupoid;
    let x = if s.source().same_as(s.target()) && s2.source().same_as(s2.target()) {
        y.clone()
    } else {
        product(s.source(), s2.source()).groupoid
    };
    SpanOfGroupoids {
        left: functor_product(&s.left, &s2.left, &apex, &y),
        right: functor_product(&s.right, &s2.right, &apex, &x),
        apex,
    }
}

/// `SΨ`: pull `Ψ` back along the right leg and push it forward along the left.
pub fn apply_span(s: &SpanOfGroupoids, psi: &GroupoidOverX) -> Result<GroupoidOverX> {
    apply_span_with(PullbackMode::Reduced, s, psi)
}

pub fn apply_span_with(mode: PullbackMode, s: &SpanOfGroupoids, psi: &GroupoidOverX) -> Result<GroupoidOverX> {
    if !s.source().same_as(psi.base()) {
        return Err(Error::Domain("span source differs from the base of the groupoid".into()));
    }
    let p = pullback_with(mode, &s.right, &psi.projection)?;
    Ok(GroupoidOverX { total: p.groupoid, projection: p.to_first.then(&s.left)? })
}

/// Labels `[x]` for the iso classes of `g`, by representative object.
pub fn class_labels(g: &FiniteGroupoid) -> Vec<String> {
    g.iso_classes().representative.iter().map(|r| format!("[{r}]")).collect()
}
