//! Prime fields `F_q` and small dense matrices over them.

use crate::error::{Error, Result};

pub fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// `F_q` for a prime `q < 256`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    q: u8,
}

/// A `rows × cols` matrix over `F_q`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

impl Field {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) || q > 251 {
            return Err(Error::NotPrime(q));
        }
        Ok(Field { q: q as u8 })
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.q as u16) as u8
    }

    pub fn neg(&self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    /// Multiplicative inverse of a nonzero element, `a^(q-2)`.
    pub fn inv(&self, a: u8) -> u8 {
        assert_ne!(a, 0, "zero has no inverse");
        (0..self.q - 2).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn dot(&self, a: &[u8], b: &[u8]) -> u8 {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        assert_eq!(a.cols, b.rows);
        let mut out = Mat::zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..b.cols {
                    let v = self.add(out.get(i, j), self.mul(x, b.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mat_add(&self, a: &Mat, b: &Mat) -> Mat {
        Mat { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(&x, &y)| self.add(x, y)).collect() }
    }

    /// Row echelon form, with the rank.
    fn echelon(&self, a: &Mat) -> (Mat, usize) {
        let mut m = a.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else { continue };
            for j in 0..m.cols {
                m.data.swap(pivot * m.cols + j, rank * m.cols + j);
            }
            let inv = self.inv(m.get(rank, col));
            for j in 0..m.cols {
                let v = self.mul(m.get(rank, j), inv);
                m.set(rank, j, v);
            }
            for r in 0..m.rows {
                let f = m.get(r, col);
                if r != rank && f != 0 {
                    for j in 0..m.cols {
                        let v = self.sub(m.get(r, j), self.mul(f, m.get(rank, j)));
                        m.set(r, j, v);
                    }
                }
            }
            rank += 1;
        }
        (m, rank)
    }

    pub fn rank(&self, a: &Mat) -> usize {
        self.echelon(a).1
    }

    pub fn det(&self, a: &Mat) -> u8 {
        assert_eq!(a.rows, a.cols);
        let n = a.rows;
        let mut m = a.clone();
        let mut det = 1u8;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| m.get(r, col) != 0) else { return 0 };
            if pivot != col {
                for j in 0..n {
                    m.data.swap(pivot * n + j, col * n + j);
                }
                det = self.neg(det);
            }
            let p = m.get(col, col);
            det = self.mul(det, p);
            let inv = self.inv(p);
            for r in col + 1..n {
                let f = self.mul(m.get(r, col), inv);
                for j in col..n {
                    let v = self.sub(m.get(r, j), self.mul(f, m.get(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self, a: &Mat) -> Option<Mat> {
        let n = a.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, a.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (e, _) = self.echelon(&aug);
        let left_is_identity = (0..n).all(|i| (0..n).all(|j| e.get(i, j) == u8::from(i == j)));
        left_is_identity.then(|| {
            let mut inv = Mat::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    inv.set(i, j, e.get(i, n + j));
                }
            }
            inv
        })
    }

    /// Every `rows × cols` matrix, in base-`q` counting order of the entries.
    pub fn all_matrices(&self, rows: usize, cols: usize) -> impl Iterator<Item = Mat> + '_ {
        let len = rows * cols;
        let total = (self.q as u64).pow(len as u32);
        (0..total).map(move |mut code| {
            let mut data = vec![0u8; len];
            for slot in data.iter_mut().rev() {
                *slot = (code % self.q as u64) as u8;
                code /= self.q as u64;
            }
            Mat { rows, cols, data }
        })
    }

    /// `GL(d, q)`, in the order of [`Field::all_matrices`].
    pub fn general_linear(&self, d: usize) -> Vec<Mat> {
        self.all_matrices(d, d).filter(|m| self.rank(m) == d).collect()
    }

    /// Scales a nonzero vector so its first nonzero entry is 1.
    pub fn normalize(&self, v: &[u8]) -> Vec<u8> {
        let lead = *v.iter().find(|&&x| x != 0).expect("nonzero vector");
        let inv = self.inv(lead);
        v.iter().map(|&x| self.mul(x, inv)).collect()
    }
}

/// `|GL(d, q)| = Π_{i<d} (q^d - q^i)`.
pub fn gl_order(d: u32, q: u64) -> u64 {
    (0..d).map(|i| q.pow(d) - q.pow(i)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(7));
        assert!(!is_prime(1) && !is_prime(4) && !is_prime(9));
        assert!(Field::new(4).is_err());
    }

    #[test]
    fn arithmetic() {
        let f = Field::new(5).unwrap();
        for a in 1..5 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.sub(1, 3), 3);
    }

    #[test]
    fn general_linear_orders() {
        for q in [2, 3] {
            let f = Field::new(q).unwrap();
            for d in 1..=2 {
                assert_eq!(f.general_linear(d).len() as u64, gl_order(d as u32, q));
            }
        }
        assert_eq!(Field::new(2).unwrap().general_linear(3).len(), 168);
    }

    #[test]
    fn inverses_and_determinants() {
        let f = Field::new(3).unwrap();
        for m in f.general_linear(2) {
            let inv = f.inverse(&m).unwrap();
            assert_eq!(f.mat_mul(&m, &inv), Mat::identity(2));
            assert_ne!(f.det(&m), 0);
        }
        let singular = Mat { rows: 2, cols: 2, data: vec![1, 2, 2, 1] };
        assert_eq!(f.det(&singular), 0);
        assert!(f.inverse(&singular).is_none());
        assert_eq!(f.rank(&singular), 1);
    }
}
