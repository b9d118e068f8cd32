//! Groupoidification of linear algebra over finite groupoids: weak
//! pullbacks, spans, exact degroupoidification, and the worked examples
//! built on them (Fock space, the A₂ Hecke algebra, Hall algebras).

pub mod action;
pub mod config;
pub mod fock;
pub mod fq;
pub mod error;
pub mod groupoid;
pub mod hall;
pub mod hecke;
pub mod linalg;
pub mod perm;
pub mod random;
pub mod rational;
pub mod span;

pub use action::{
    degroupoidify_equivariant, materialize, weak_quotient, EquivariantSpan, FiniteGroup, GroupAction, Orbits,
    TableAction,
};
pub use error::{Error, Result};
pub use hall::{HallAlgebra, HallElement, Quiver, QuiverRep, RepClassTable};
pub use hecke::{BruhatCell, FlagGeometry, HeckeStructure};
pub use groupoid::{FiniteGroupoid, GroupoidFunctor, GroupoidRef, IsoClassTable};
pub use linalg::{RationalMatrix, RationalVector, Surd, SurdMatrix};
pub use rational::Rational;
pub use span::{Alpha, GroupoidOverX, SpanOfGroupoids};
