use crate::error::Result;
use crate::groupoid::full_subgroupoid;
use crate::linalg::{RationalMatrix, RationalVector, Surd, SurdMatrix};
use crate::rational::{int, recip, Rational};

use super::{
    alpha_weight, apply_span_with, surd_weight, vector_weight, vector_weight_surd, Alpha, GroupoidOverX,
    PullbackMode, SpanOfGroupoids,
};

/// `|full inverse image of x|` for each class `[x]` of the base.
fn fiber_cardinalities(psi: &GroupoidOverX) -> Vec<Rational> {
    let base = psi.base().iso_classes();
    let mut acc = vec![Rational::from_integer(0.into()); base.num_classes()];
    let total = psi.total.iso_classes();
    for (c, &a) in total.representative.iter().enumerate() {
        let x = base.class_of[psi.projection.object(a)];
        acc[x] += recip(total.aut_order[c]);
    }
    acc
}

/// Entry `[x]` is `|Aut x|^α · |Ψ_x|`, where `Ψ_x` is the full inverse image.
pub fn degroupoidify_vector(psi: &GroupoidOverX, alpha: &Alpha) -> Result<RationalVector> {
    let aut = &psi.base().iso_classes().aut_order;
    fiber_cardinalities(psi)
        .into_iter()
        .zip(aut)
        .map(|(v, &a)| Ok(vector_weight(a, alpha)? * v))
        .collect()
}

pub fn degroupoidify_vector_surd(psi: &GroupoidOverX, alpha: &Alpha) -> Result<Vec<Surd>> {
    let aut = &psi.base().iso_classes().aut_order;
    fiber_cardinalities(psi)
        .into_iter()
        .zip(aut)
        .map(|(v, &a)| {
            let w = vector_weight_surd(a, alpha)?;
            Ok(Surd::new(w.coeff * v, w.radicand))
        })
        .collect()
}

/// `Σ 1/|Aut s|` over apex classes lying over `([y], [x])`.
fn groupoid_counts(s: &SpanOfGroupoids) -> RationalMatrix {
    let (xs, ys) = (s.source().iso_classes(), s.target().iso_classes());
    let apex = s.apex.iso_classes();
    let mut m = RationalMatrix::zeros(ys.num_classes(), xs.num_classes());
    for (c, &a) in apex.representative.iter().enumerate() {
        let x = xs.class_of[s.right.object(a)];
        let y = ys.class_of[s.left.object(a)];
        m.add_at(y, x, &recip(apex.aut_order[c]));
    }
    m
}

/// The α-degroupoidified matrix: entry `([y], [x])` is the sum over apex
/// classes `[s]` over `x` and `y` of `|Aut x|^(1-α) |Aut y|^α / |Aut s|`.
pub fn degroupoidify_span(s: &SpanOfGroupoids, alpha: &Alpha) -> Result<RationalMatrix> {
    let counts = groupoid_counts(s);
    let (ax, ay) = (&s.source().iso_classes().aut_order, &s.target().iso_classes().aut_order);
    let mut m = RationalMatrix::zeros(counts.rows(), counts.cols());
    for y in 0..counts.rows() {
        for x in 0..counts.cols() {
            let c = counts.get(y, x);
            if *c != int(0) {
                m.set(y, x, alpha_weight(ax[x], ay[y], alpha)? * c);
            }
        }
    }
    Ok(m)
}

/// As [`degroupoidify_span`], with entries `r·√k` so that half-integer `α`
/// stays exact.
pub fn degroupoidify_span_surd(s: &SpanOfGroupoids, alpha: &Alpha) -> Result<SurdMatrix> {
    let counts = groupoid_counts(s);
    let (ax, ay) = (&s.source().iso_classes().aut_order, &s.target().iso_classes().aut_order);
    let mut data = Vec::with_capacity(counts.rows() * counts.cols());
    for y in 0..counts.rows() {
        for x in 0..counts.cols() {
            let c = counts.get(y, x);
            data.push(if *c == int(0) {
                Surd::zero()
            } else {
                let w = surd_weight(ax[x], ay[y], alpha)?;
                Surd::new(w.coeff * c, w.radicand)
            });
        }
    }
    Ok(SurdMatrix { rows: counts.rows(), cols: counts.cols(), data })
}

/// The matrix computed one column at a time by applying the span, through a
/// literal weak pullback, to `1//Aut(x) -> X` and rescaling. Slow; used to
/// cross-check [`degroupoidify_span`].
pub fn degroupoidify_span_via_pullback(s: &SpanOfGroupoids, alpha: &Alpha) -> Result<RationalMatrix> {
    let x_grp = s.source();
    let xs = x_grp.iso_classes();
    let rows = s.target().iso_classes().num_classes();
    let mut m = RationalMatrix::zeros(rows, xs.num_classes());
    for (c, &r) in xs.representative.iter().enumerate() {
        let (_, incl) = full_subgroupoid(x_grp, &[r]);
        let column = degroupoidify_vector(&apply_span_with(PullbackMode::Literal, s, &GroupoidOverX::new(incl))?, alpha)?;
        // the vector of 1//Aut(x) is |Aut x|^(α-1) at [x]
        let scale = int(xs.aut_order[c]) / vector_weight(xs.aut_order[c], alpha)?;
        for (y, v) in column.into_iter().enumerate() {
            m.set(y, c, v * &scale);
        }
    }
    Ok(m)
}
