use thiserror::Error;

use crate::groupoid::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (wrong endpoint,
    /// unknown object, mismatched codomains, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} would need {size} entries, above the size cap of {cap}")]
    SizeCap {
        what: &'static str,
        size: u128,
        cap: u64,
    },

    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(ValidationReport),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    /// `|Aut|^alpha` is irrational for some automorphism group in play.
    #[error("entry is irrational at alpha = {alpha}; use the surd form")]
    Inexact { alpha: String },

    #[error("unsupported alpha {0}: only integers and half-integers are handled")]
    UnsupportedAlpha(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
