//! Dense matrices over a [`Scalar`] backend.
//!
//! Row-major storage; vectors are 1×n matrices, matching the row-vector
//! convention `π ↦ πM` used throughout the automaton model.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Rational, RealScalar, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: alloc::vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse {
                what: "matrix",
                message: alloc::string::String::from("rows have unequal lengths"),
            });
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// A 1×n row vector.
    pub fn row_vector(entries: Vec<T>) -> Self {
        Matrix { rows: 1, cols: entries.len(), data: entries }
    }

    /// Standard basis row vector `e_i` (0-based) of length `n`.
    pub fn basis_row(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(1, n);
        v.data[i] = T::one();
        v
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matrix product",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "matrix sum",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "matrix difference",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, factor: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(factor)).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect() }
    }

    /// Conjugate transpose `M† = (M*)ᵀ`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    pub fn trace(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut t = T::zero();
        for i in 0..self.rows {
            t = t.add(self.at(i, i));
        }
        Ok(t)
    }

    /// Kronecker product; dimensions `(m·p) × (n·q)`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        Self::from_fn(self.rows * p, self.cols * q, |i, j| {
            self.at(i / p, j / q).mul(other.at(i % p, j % q))
        })
    }

    /// Block-diagonal sum; dimensions `(m+p) × (n+q)` with zero off-blocks.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.at(i, j).clone());
            }
        }
        out
    }

    /// Row-flattening `φ(M)`: the 1×(r·c) vector `(row₁, …, row_r)`.
    pub fn flatten_rows(&self) -> Self {
        Matrix { rows: 1, cols: self.rows * self.cols, data: self.data.clone() }
    }

    /// True when every entry of `self − other` has modulus at most `tol`
    /// (compared as `|z|² ≤ tol²`, so exact backends need no square roots).
    pub fn approx_eq(&self, other: &Self, tol: &T::Real) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        let tol_sq = tol.mul(tol);
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| a.sub(b).abs_sq().partial_cmp(&tol_sq) != Some(core::cmp::Ordering::Greater))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// True iff `self` is Hermitian and idempotent within `tol`
    /// (`‖M − M†‖_max ≤ tol` and `‖M·M − M‖_max ≤ tol`); pass a zero
    /// tolerance in exact mode.
    pub fn is_projector(&self, tol: &T::Real) -> Result<bool> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        if !self.approx_eq(&self.adjoint(), tol) {
            return Ok(false);
        }
        Ok(self.mul(self)?.approx_eq(self, tol))
    }

    /// Squared Frobenius norm `Σ |entry|²`; for row vectors this is `‖v‖²`.
    pub fn norm_sq(&self) -> T::Real {
        let mut acc = T::Real::zero();
        for a in &self.data {
            acc = acc.add(&a.abs_sq());
        }
        acc
    }

    /// Vector norm `√(v, v)` with inner product `vξ†`. Exact mode requires the
    /// squared norm to be rational (it always is for rational entries).
    pub fn vec_norm2(&self) -> Result<T::Real> {
        self.norm_sq().sqrt()
    }

    /// Convenience: entry from a rational.
    pub fn set_ratio(&mut self, i: usize, j: usize, r: Rational) {
        self.set(i, j, T::from_ratio(r));
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", self.at(i, j))?;
                if j + 1 < self.cols {
                    write!(f, ", ")?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
