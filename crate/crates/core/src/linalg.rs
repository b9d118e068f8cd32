//! Dense exact matrices over the rationals, plus a surd form `c·√k` used for
//! half-integer conventions.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::rational::{int, to_pq, Rational};

pub type RationalVector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Rational::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Rational) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        RationalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols)
        })
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RationalVector {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    /// Top-left `n × n` block.
    pub fn block(&self, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| self.get(i, j).clone())
    }

    pub fn to_pq_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(to_pq).collect()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.to_pq_rows() {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;

    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;

    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_pq_rows() {
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// JSON shape for exported matrices.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixJson {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn new(m: &RationalMatrix, rows: Vec<String>, cols: Vec<String>) -> Self {
        assert_eq!((rows.len(), cols.len()), (m.rows(), m.cols()));
        MatrixJson { rows, cols, entries: m.to_pq_rows() }
    }
}

fn squarefree_split(mut n: u64) -> (u64, u64) {
    // n = outer² · inner with inner squarefree
    let mut outer = 1;
    let mut inner = 1;
    let mut p = 2;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
            outer *= p;
        }
        if n % p == 0 {
            n /= p;
            inner *= p;
        }
        p += 1;
    }
    (outer, inner * n)
}

/// `coeff · √radicand`, radicand squarefree (1 for rationals and for zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    pub coeff: Rational,
    pub radicand: u64,
}

impl Surd {
    pub fn new(coeff: Rational, radicand: u64) -> Self {
        assert!(radicand > 0, "radicand must be positive");
        if coeff.is_zero() {
            return Surd::zero();
        }
        let (outer, inner) = squarefree_split(radicand);
        Surd { coeff: coeff * int(BigInt::from(outer)), radicand: inner }
    }

    pub fn zero() -> Self {
        Surd { coeff: Rational::zero(), radicand: 1 }
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 1
    }

    /// Sum of two surds with the same radicand; `None` otherwise.
    pub fn checked_add(&self, other: &Surd) -> Option<Surd> {
        if self.coeff.is_zero() {
            return Some(other.clone());
        }
        if other.coeff.is_zero() {
            return Some(self.clone());
        }
        (self.radicand == other.radicand).then(|| Surd::new(&self.coeff + &other.coeff, self.radicand))
    }

    pub fn to_f64(&self) -> f64 {
        crate::rational::to_f64(&self.coeff) * (self.radicand as f64).sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 {
            write!(f, "{}", to_pq(&self.coeff))
        } else {
            write!(f, "{}*sqrt({})", to_pq(&self.coeff), self.radicand)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Surd>,
}

impl SurdMatrix {
    pub fn get(&self, i: usize, j: usize) -> &Surd {
        &self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        SurdMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// The exact rational matrix when every entry is rational.
    pub fn to_rational(&self) -> Option<RationalMatrix> {
        self.data.iter().all(Surd::is_rational).then(|| {
            RationalMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).coeff.clone())
        })
    }
}
