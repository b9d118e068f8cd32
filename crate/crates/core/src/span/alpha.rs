//! The exponent `α` of α-degroupoidification and the weights it induces.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::linalg::Surd;
use crate::rational::{int, parse_pq, pow_i, to_pq, Rational};

/// A rational exponent. Integers give exact rational weights; halves of odd
/// integers give weights of the form `r·√k`. Anything else is rejected when
/// a weight is requested.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alpha(Rational);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaKind {
    Integer(i64),
    /// `α = k + 1/2`.
    Half(i64),
}

impl Alpha {
    pub fn new(value: Rational) -> Self {
        Alpha(value)
    }

    pub fn integer(k: i64) -> Self {
        Alpha(int(k))
    }

    pub fn half() -> Self {
        Alpha(Rational::new(BigInt::one(), BigInt::from(2)))
    }

    /// Accepts `p/q`, integers, and decimals such as `0.5`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((whole, frac)) = s.split_once('.') {
            let digits = format!("{whole}{frac}");
            let den = BigInt::from(10).pow(frac.len() as u32);
            let num: BigInt = digits.parse().map_err(|_| Error::Parse(format!("not a number: {s:?}")))?;
            return Ok(Alpha(Rational::new(num, den)));
        }
        parse_pq(s).map(Alpha)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn kind(&self) -> Result<AlphaKind> {
        let unsupported = || Error::UnsupportedAlpha(to_pq(&self.0));
        let twice = &self.0 * int(2);
        if !twice.is_integer() {
            return Err(unsupported());
        }
        let twice = twice.to_integer().to_i64().ok_or_else(unsupported)?;
        Ok(if twice.is_even() { AlphaKind::Integer(twice / 2) } else { AlphaKind::Half(Integer::div_floor(&twice, &2)) })
    }

    /// `1 - α`, the exponent whose matrices are the transposes of adjoints.
    pub fn complement(&self) -> Self {
        Alpha(int(1) - &self.0)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_pq(&self.0))
    }
}

fn r(n: u64) -> Rational {
    int(n)
}

/// `|Aut x|^(1-α) |Aut y|^α` as a surd.
pub fn surd_weight(aut_x: u64, aut_y: u64, alpha: &Alpha) -> Result<Surd> {
    Ok(match alpha.kind()? {
        AlphaKind::Integer(k) => Surd::new(pow_i(&r(aut_x), 1 - k) * pow_i(&r(aut_y), k), 1),
        AlphaKind::Half(k) => {
            let radicand = aut_x.checked_mul(aut_y).ok_or_else(|| Error::Inexact { alpha: alpha.to_string() })?;
            Surd::new(pow_i(&r(aut_x), -k) * pow_i(&r(aut_y), k), radicand)
        }
    })
}

/// `|Aut x|^(1-α) |Aut y|^α`, or an inexact error when it is irrational.
pub fn alpha_weight(aut_x: u64, aut_y: u64, alpha: &Alpha) -> Result<Rational> {
    rational(surd_weight(aut_x, aut_y, alpha)?, alpha)
}

/// `|Aut x|^α` as a surd.
pub fn vector_weight_surd(aut_x: u64, alpha: &Alpha) -> Result<Surd> {
    Ok(match alpha.kind()? {
        AlphaKind::Integer(k) => Surd::new(pow_i(&r(aut_x), k), 1),
        AlphaKind::Half(k) => Surd::new(pow_i(&r(aut_x), k), aut_x),
    })
}

/// `|Aut x|^α`, or an inexact error when it is irrational.
pub fn vector_weight(aut_x: u64, alpha: &Alpha) -> Result<Rational> {
    rational(vector_weight_surd(aut_x, alpha)?, alpha)
}

fn rational(s: Surd, alpha: &Alpha) -> Result<Rational> {
    if s.is_rational() {
        Ok(s.coeff)
    } else {
        Err(Error::Inexact { alpha: alpha.to_string() })
    }
}
