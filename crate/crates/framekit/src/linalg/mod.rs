//! Dense complex linear algebra used by the frame machinery.
//!
//! Matrices are row-major over `Complex<f64>`. Sizes here are small (a few
//! hundred rows at most), so the implementations favor clarity and
//! reproducibility over blocked performance.

mod chol;
mod eig;

pub use chol::{solve_hpd, solve_hpd_matrix, Cholesky};
pub use eig::{hermitian_eig, EigenResult};

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex<f64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Inner product linear in the first argument: sum of `a_i * conj(b_i)`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = ZERO;
    for (x, y) in a.iter().zip(b) {
        acc += x * y.conj();
    }
    acc
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(a: &[C64]) -> f64 {
    let mut acc = 0.0;
    for x in a {
        acc += x.norm_sqr();
    }
    libm::sqrt(acc)
}

pub(crate) fn vec_sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Row-major dense complex matrix with at least one row and one column.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// Builds a matrix from row-major data, rejecting empty shapes,
    /// length mismatches and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter {
                what: "matrix must have at least one row and one column",
            });
        }
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        let m = CMatrix { rows, cols, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = entries[i];
        }
        m
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_col(&mut self, j: usize, col: &[C64]) {
        debug_assert_eq!(col.len(), self.rows);
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, *v);
        }
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Matrix product; panics on shape mismatch. Domain-level operations
    /// validate shapes and surface typed errors before calling this.
    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let lhs_row = self.row(i);
            let out_base = i * rhs.cols;
            for (k, a) in lhs_row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = rhs.row(k);
                for (j, b) in rhs_row.iter().enumerate() {
                    out.data[out_base + j] += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, x.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| inner_plain(self.row(i), x)).collect()
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        let data = self.data.iter().map(|a| a * s).collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn fro_norm(&self) -> f64 {
        let mut acc = 0.0;
        for z in &self.data {
            acc += z.norm_sqr();
        }
        libm::sqrt(acc)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        let mut best = 0.0;
        for z in &self.data {
            let a = z.norm();
            if a > best {
                best = a;
            }
        }
        best
    }

    /// Relative deviation from Hermitian symmetry, `||A - A*||_F / ||A||_F`
    /// (zero for the zero matrix).
    pub fn hermitian_residual(&self) -> f64 {
        assert!(self.is_square());
        let nrm = self.fro_norm();
        if nrm == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let diff = self.get(i, j) - self.get(j, i).conj();
                acc += diff.norm_sqr();
            }
        }
        libm::sqrt(acc) / nrm
    }

    /// Hermitian part `(A + A*) / 2`. The result is exactly Hermitian:
    /// entry (i, j) and entry (j, i) are built from the same two products.
    pub fn hermitian_part(&self) -> CMatrix {
        assert!(self.is_square());
        CMatrix::from_fn(self.rows, self.rows, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * C64::new(0.5, 0.0)
        })
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        let mut acc = ZERO;
        for i in 0..self.rows {
            acc += self.get(i, i);
        }
        acc
    }
}

impl core::fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(8) {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f, "{}", if self.cols > 8 { "..." } else { "" })?;
        }
        if self.rows > 8 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

/// Plain bilinear accumulation without conjugation (matrix row times vector).
fn inner_plain(a: &[C64], b: &[C64]) -> C64 {
    let mut acc = ZERO;
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Spectral norm (largest singular value), computed from the Hermitian
/// eigendecomposition of `A* A`.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let gram = a.adjoint().mul(a);
    let eig = hermitian_eig(&gram, 1e-8)?;
    let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
    Ok(libm::sqrt(top.max(0.0)))
}

/// Hermitian positive semi-definite square root via eigendecomposition.
///
/// Eigenvalues in `[-tol * max_eig, 0)` are treated as rounding noise and
/// clamped to zero; anything more negative is rejected as `NotPsd`.
pub fn hermitian_sqrt(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(a, tol)?;
    let top = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, &v| m.max(libm::fabs(v)));
    let mut roots = Vec::with_capacity(eig.eigenvalues.len());
    for &v in &eig.eigenvalues {
        if v < -tol * top {
            return Err(Error::NotPsd { min_eigenvalue: v });
        }
        roots.push(libm::sqrt(v.max(0.0)));
    }
    Ok(rescale_eigenbasis(&eig.eigenvectors, &roots))
}

/// Hermitian embedding `[[0, A], [A*, 0]]`, whose positive spectrum is the
/// singular spectrum of `A`. Working on the embedding instead of `A* A`
/// keeps small singular values at full absolute accuracy.
fn embed_hermitian(a: &CMatrix) -> CMatrix {
    let (m, n) = (a.rows(), a.cols());
    let mut h = CMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            let z = a.get(i, j);
            h.set(i, m + j, z);
            h.set(m + j, i, z.conj());
        }
    }
    h
}

/// Smallest and largest singular value of a matrix.
pub fn singular_range(a: &CMatrix) -> Result<(f64, f64)> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let eig = hermitian_eig(&embed_hermitian(a), 1e-12)?;
    let mut smallest = f64::INFINITY;
    let mut largest = 0.0f64;
    // Eigenvalues come in +/- sigma pairs, padded with |rows - cols| zeros.
    let pad = a.rows().abs_diff(a.cols());
    let mut mags: Vec<f64> = eig.eigenvalues.iter().map(|&v| libm::fabs(v)).collect();
    mags.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite"));
    for &s in mags.iter().skip(pad).step_by(2) {
        smallest = smallest.min(s);
        largest = largest.max(s);
    }
    if !smallest.is_finite() {
        smallest = 0.0;
    }
    Ok((smallest, largest))
}

/// Moore-Penrose pseudo-inverse.
///
/// Hermitian inputs go through their own eigendecomposition. General
/// inputs use the Hermitian embedding, which avoids forming `A* A` and
/// the accuracy loss that squaring brings near the rank cutoff.
/// Singular values at or below `rank_tol * sigma_max` are discarded.
pub fn pseudo_inverse(a: &CMatrix, rank_tol: f64) -> Result<CMatrix> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if a.is_square() && a.hermitian_residual() <= 1e-13 {
        let eig = hermitian_eig(a, 1e-12)?;
        let top = eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, &v| m.max(libm::fabs(v)));
        let cut = rank_tol * top;
        let inv: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&v| if libm::fabs(v) > cut { 1.0 / v } else { 0.0 })
            .collect();
        return Ok(rescale_eigenbasis(&eig.eigenvectors, &inv));
    }

    let (m, n) = (a.rows(), a.cols());
    let eig = hermitian_eig(&embed_hermitian(a), 1e-12)?;
    let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Ok(CMatrix::zeros(n, m));
    }
    let cut = rank_tol * top;
    let mut pinv = CMatrix::zeros(n, m);
    for (idx, &sigma) in eig.eigenvalues.iter().enumerate() {
        if sigma <= cut {
            continue;
        }
        // Eigenvector [u; v] with ||u|| = ||v|| = 1/sqrt(2); contribute
        // (sqrt(2) v)(sqrt(2) u)* / sigma.
        let q = &eig.eigenvectors;
        for r in 0..n {
            let vr = q.get(m + r, idx);
            for c in 0..m {
                let uc = q.get(c, idx);
                let add = vr * uc.conj() * C64::new(2.0 / sigma, 0.0);
                let cur = pinv.get(r, c);
                pinv.set(r, c, cur + add);
            }
        }
    }
    Ok(pinv)
}

/// `V diag(vals) V*` for a unitary `V` and real `vals`.
fn rescale_eigenbasis(v: &CMatrix, vals: &[f64]) -> CMatrix {
    let n = v.rows();
    let mut scaled = v.clone();
    for j in 0..n {
        let s = C64::new(vals[j], 0.0);
        for i in 0..n {
            let cur = scaled.get(i, j);
            scaled.set(i, j, cur * s);
        }
    }
    scaled.mul(&v.adjoint())
}
