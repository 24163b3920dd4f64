//! Cholesky factorization and positive-definite solves.

use alloc::vec;
use alloc::vec::Vec;

use super::{CMatrix, C64};
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
pub struct Cholesky {
    n: usize,
    // Row-major lower triangle; entries above the diagonal stay zero.
    l: Vec<C64>,
}

impl Cholesky {
    /// Factors `A = L L*`.
    ///
    /// The input must be Hermitian within `tol` (relative Frobenius
    /// deviation). Positivity is certified by the pivots: a pivot at or
    /// below `tol * max_diag` means the matrix is numerically singular or
    /// indefinite and yields `NotPd`.
    pub fn new(a: &CMatrix, tol: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimMismatch { op: "cholesky" });
        }
        if !a.is_finite() {
            return Err(Error::NonFinite);
        }
        let residual = a.hermitian_residual();
        if residual > tol {
            return Err(Error::NotHermitian { residual, tol });
        }
        let n = a.rows();
        let mut max_diag = 0.0f64;
        for i in 0..n {
            max_diag = max_diag.max(a.get(i, i).re);
        }
        if max_diag <= 0.0 {
            return Err(Error::NotPd);
        }
        let floor = tol * max_diag;
        let mut l = vec![super::ZERO; n * n];
        for j in 0..n {
            let mut d = a.get(j, j).re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d <= floor {
                return Err(Error::NotPd);
            }
            let ljj = libm::sqrt(d);
            l[j * n + j] = C64::new(ljj, 0.0);
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / ljj;
            }
        }
        Ok(Cholesky { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b` by forward and back substitution.
    pub fn solve_vec(&self, b: &[C64]) -> Result<Vec<C64>> {
        if b.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: b.len(),
            });
        }
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let lik = self.l[i * n + k];
                y[i] = y[i] - lik * y[k];
            }
            y[i] /= self.l[i * n + i].re;
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let lki = self.l[k * n + i];
                y[i] = y[i] - lki.conj() * y[k];
            }
            y[i] /= self.l[i * n + i].re;
        }
        Ok(y)
    }

    /// Solves `A X = B` column by column against one factorization.
    pub fn solve_matrix(&self, b: &CMatrix) -> Result<CMatrix> {
        if b.rows() != self.n {
            return Err(Error::DimMismatch { op: "cholesky solve" });
        }
        let mut out = CMatrix::zeros(self.n, b.cols());
        for j in 0..b.cols() {
            let col = self.solve_vec(&b.col(j))?;
            out.set_col(j, &col);
        }
        Ok(out)
    }
}

/// Solves a single Hermitian positive definite system `A x = b`.
pub fn solve_hpd(a: &CMatrix, b: &[C64], tol: f64) -> Result<Vec<C64>> {
    Cholesky::new(a, tol)?.solve_vec(b)
}

/// Solves `A X = B` for Hermitian positive definite `A`.
pub fn solve_hpd_matrix(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<CMatrix> {
    Cholesky::new(a, tol)?.solve_matrix(b)
}
