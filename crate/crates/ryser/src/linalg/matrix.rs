//! Dense matrices of exact rationals with arbitrary-precision parts.
//!
//! Elimination is exact, so there is no pivot tolerance anywhere; the pivot
//! is always the first row with a nonzero entry in the current column,
//! which keeps results bit-identical across runs. Determinants go through
//! fraction-free (Bareiss) elimination on a denominator-cleared integer
//! copy; inverses and ranks use rational Gauss-Jordan.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut m = RationalMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        RationalMatrix::from_fn(rows, cols, |i, j| {
            BigRational::from(BigInt::from(entries[i * cols + j]))
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        RationalMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a * &other[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * factor)
    }

    pub fn trace(&self) -> BigRational {
        assert!(self.is_square());
        let mut t = BigRational::zero();
        for i in 0..self.rows {
            t += self[(i, i)].clone();
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want_one = i == j;
                if self[(i, j)].is_one() != want_one || (!want_one && !self[(i, j)].is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// First coordinate where the two matrices differ, if any.
    pub fn first_mismatch(&self, other: &Self) -> Option<(usize, usize)> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)] != other[(i, j)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Determinant by fraction-free Bareiss elimination. Each row is
    /// cleared to integers first; the accumulated scale divides out at the
    /// end, so the result is exact.
    pub fn det(&self) -> BigRational {
        assert!(self.is_square(), "determinant needs a square matrix");
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut lcm = BigInt::one();
            for j in 0..n {
                lcm = lcm.lcm(self[(i, j)].denom());
            }
            let row: Vec<BigInt> = (0..n)
                .map(|j| {
                    let e = &self[(i, j)];
                    e.numer() * (&lcm / e.denom())
                })
                .collect();
            scale *= &lcm;
            m.push(row);
        }

        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigRational::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[i][j] = q;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det_int = if sign < 0 { -m[n - 1][n - 1].clone() } else { m[n - 1][n - 1].clone() };
        BigRational::new(det_int, scale)
    }

    /// Inverse by exact Gauss-Jordan elimination on `[self | I]`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::invalid("cannot invert a non-square matrix"));
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = RationalMatrix::identity(n);
        for col in 0..n {
            let Some(pivot_row) = (col..n).find(|&i| !work[(i, col)].is_zero()) else {
                return Err(Error::invalid(format!("matrix is singular at column {col}")));
            };
            if pivot_row != col {
                work.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let pivot = work[(col, col)].clone();
            for j in 0..n {
                work[(col, j)] /= pivot.clone();
                inv[(col, j)] /= pivot.clone();
            }
            for i in 0..n {
                if i == col || work[(i, col)].is_zero() {
                    continue;
                }
                let factor = work[(i, col)].clone();
                for j in 0..n {
                    let w = &work[(col, j)] * &factor;
                    work[(i, j)] -= w;
                    let v = &inv[(col, j)] * &factor;
                    inv[(i, j)] -= v;
                }
            }
        }
        Ok(inv)
    }

    /// Rank by exact forward elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot_row) = (rank..self.rows).find(|&i| !work[(i, col)].is_zero()) else {
                continue;
            };
            work.swap_rows(pivot_row, rank);
            let pivot = work[(rank, col)].clone();
            for i in rank + 1..self.rows {
                if work[(i, col)].is_zero() {
                    continue;
                }
                let factor = &work[(i, col)] / &pivot;
                for j in col..self.cols {
                    let w = &work[(rank, j)] * &factor;
                    work[(i, j)] -= w;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Debug dump: one row per line, entries as `num/den` with the
    /// denominator omitted when 1.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let mut first = true;
            for j in 0..self.cols {
                if !first {
                    out.push(' ');
                }
                first = false;
                let e = &self[(i, j)];
                if e.denom().is_one() {
                    out.push_str(&e.numer().to_string());
                } else {
                    out.push_str(&format!("{}/{}", e.numer(), e.denom()));
                }
            }
            out.push('\n');
        }
        out
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// `n` as an exact rational.
pub fn rational(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// `p/q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Laplace-expansion determinant, an oracle independent of both
    /// elimination routines. Exponential, so tiny orders only.
    fn det_laplace(m: &RationalMatrix) -> BigRational {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut det = BigRational::zero();
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let minor = RationalMatrix::from_fn(n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })].clone()
            });
            let term = &m[(0, j)] * det_laplace(&minor);
            if j % 2 == 0 {
                det += term;
            } else {
                det -= term;
            }
        }
        det
    }

    #[test]
    fn det_matches_laplace_oracle() {
        let m = RationalMatrix::from_i64(3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]);
        assert_eq!(m.det(), det_laplace(&m));
        let m = RationalMatrix::from_fn(4, 4, |i, j| ratio((i * 4 + j) as i64 % 5 - 2, 1 + j as i64));
        assert_eq!(m.det(), det_laplace(&m));
    }

    #[test]
    fn det_singular_is_zero() {
        let m = RationalMatrix::from_i64(3, 3, &[1, 2, 3, 2, 4, 6, 1, 0, 1]);
        assert!(m.det().is_zero());
        assert!(m.inverse().is_err());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = RationalMatrix::from_i64(3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }

    #[test]
    fn rank_one() {
        let m = RationalMatrix::from_i64(3, 3, &[1, 2, 3, 2, 4, 6, 3, 6, 9]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn dump_format() {
        let mut m = RationalMatrix::identity(2);
        m[(0, 1)] = ratio(-1, 3);
        assert_eq!(m.dump(), "1 -1/3\n0 1\n");
    }
}
