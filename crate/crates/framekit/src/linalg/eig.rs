//! Hermitian eigendecomposition.
//!
//! Two stages: unitary Householder reduction to tridiagonal form with the
//! complex subdiagonal phases folded into the basis, then the classic
//! implicit-shift QL iteration on the resulting real symmetric tridiagonal
//! matrix with rotations accumulated into the complex basis.

use alloc::vec;
use alloc::vec::Vec;

use super::{CMatrix, C64, ONE};
use crate::error::{Error, Result};

/// Spectral decomposition of a Hermitian matrix.
///
/// `eigenvalues` are ascending; column `j` of `eigenvectors` is a unit
/// eigenvector for `eigenvalues[j]` and the columns are orthonormal.
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// The input must be square, finite and Hermitian within `tol` (relative
/// Frobenius deviation). Computation proceeds on the exactly-Hermitian
/// average `(A + A*) / 2`.
pub fn hermitian_eig(a: &CMatrix, tol: f64) -> Result<EigenResult> {
    if !a.is_square() {
        return Err(Error::DimMismatch { op: "hermitian_eig" });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = a.hermitian_residual();
    if residual > tol {
        return Err(Error::NotHermitian { residual, tol });
    }
    let b = a.hermitian_part();
    let n = b.rows();
    if n == 1 {
        return Ok(EigenResult {
            eigenvalues: vec![b.get(0, 0).re],
            eigenvectors: CMatrix::identity(1),
        });
    }
    let (mut d, mut e, mut q) = tridiagonalize(&b);
    ql_implicit(&mut d, &mut e, &mut q)?;
    sort_ascending(&mut d, &mut q);
    Ok(EigenResult {
        eigenvalues: d,
        eigenvectors: q,
    })
}

/// Householder reduction of an exactly Hermitian matrix to real symmetric
/// tridiagonal form. Returns `(diag, off, q)` with `off[i]` coupling
/// `diag[i]` and `diag[i + 1]` (`off[n - 1]` is zero padding) and
/// `q* a q` tridiagonal.
fn tridiagonalize(a: &CMatrix) -> (Vec<f64>, Vec<f64>, CMatrix) {
    let n = a.rows();
    let mut w: Vec<C64> = a.data().to_vec();
    let mut q = CMatrix::identity(n);

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let mut xnorm_sq = 0.0;
        for i in (k + 1)..n {
            xnorm_sq += w[i * n + k].norm_sqr();
        }
        let mut tail_sq = 0.0;
        for i in (k + 2)..n {
            tail_sq += w[i * n + k].norm_sqr();
        }
        // Nothing below the subdiagonal: the column is already in shape and
        // any residual subdiagonal phase is handled by the folding pass.
        if tail_sq == 0.0 || xnorm_sq == 0.0 {
            continue;
        }

        let r = libm::sqrt(xnorm_sq);
        let x0 = w[(k + 1) * n + k];
        let x0_abs = x0.norm();
        let phase = if x0_abs > 0.0 { x0 / x0_abs } else { ONE };
        let alpha = -phase * r;

        // Reflection I - cfac * u u* sending the column segment onto alpha e1.
        let mut u = vec![super::ZERO; len];
        u[0] = x0 - alpha;
        for i in 1..len {
            u[i] = w[(k + 1 + i) * n + k];
        }
        let cfac = 1.0 / (r * r + r * x0_abs);

        // Two-sided Hermitian update of the trailing block:
        // B <- B - u w* - w u* with w = p - (cfac/2)(u* p) u, p = cfac B u.
        let mut p = vec![super::ZERO; len];
        for i in 0..len {
            let row = (k + 1 + i) * n + (k + 1);
            let mut acc = super::ZERO;
            for j in 0..len {
                acc += w[row + j] * u[j];
            }
            p[i] = acc * cfac;
        }
        let mut upc = super::ZERO;
        for i in 0..len {
            upc += u[i].conj() * p[i];
        }
        let kappa = C64::new(0.5 * cfac * upc.re, 0.0);
        let wv: Vec<C64> = (0..len).map(|i| p[i] - kappa * u[i]).collect();
        for i in 0..len {
            let row = (k + 1 + i) * n + (k + 1);
            for j in 0..len {
                w[row + j] -= u[i] * wv[j].conj() + wv[i] * u[j].conj();
            }
        }

        w[(k + 1) * n + k] = alpha;
        w[k * n + (k + 1)] = alpha.conj();
        for i in (k + 2)..n {
            w[i * n + k] = super::ZERO;
            w[k * n + i] = super::ZERO;
        }

        // Accumulate Q <- Q (I - cfac u u*) on columns k+1..n.
        for rr in 0..n {
            let mut t = super::ZERO;
            for j in 0..len {
                t += q.get(rr, k + 1 + j) * u[j];
            }
            let t = t * cfac;
            for j in 0..len {
                let cur = q.get(rr, k + 1 + j);
                q.set(rr, k + 1 + j, cur - t * u[j].conj());
            }
        }
    }

    // Fold subdiagonal phases into the basis so the tridiagonal matrix is real.
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in 0..n {
        d[i] = w[i * n + i].re;
    }
    let mut phi = ONE;
    for i in 0..(n - 1) {
        let beta = w[(i + 1) * n + i];
        let mag = beta.norm();
        e[i] = mag;
        let step = if mag > 0.0 { beta / mag } else { ONE };
        phi *= step;
        for rr in 0..n {
            let cur = q.get(rr, i + 1);
            q.set(rr, i + 1, cur * phi);
        }
    }
    (d, e, q)
}

/// Implicit-shift QL sweep on a real symmetric tridiagonal matrix, with the
/// plane rotations applied to the complex basis columns.
fn ql_implicit(d: &mut [f64], e: &mut [f64], q: &mut CMatrix) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    e[n - 1] = 0.0;

    for l in 0..n {
        tst1 = tst1.max(libm::fabs(d[l]) + libm::fabs(e[l]));
        let mut m = l;
        while m < n {
            if libm::fabs(e[m]) <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 50 {
                    return Err(Error::IterationLimit {
                        what: "tridiagonal QL",
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for i in (l + 2)..n {
                    d[i] -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gg = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gg;
                    d[i + 1] = h + s * (c * gg + s * d[i]);
                    for k in 0..q.rows() {
                        let hv = q.get(k, i + 1);
                        let lo = q.get(k, i);
                        q.set(k, i + 1, lo * s + hv * c);
                        q.set(k, i, lo * c - hv * s);
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if libm::fabs(e[l]) <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn sort_ascending(d: &mut Vec<f64>, q: &mut CMatrix) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
    let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut qs = CMatrix::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        let col = q.col(old_j);
        qs.set_col(new_j, &col);
    }
    *d = sorted;
    *q = qs;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Reconstruction and orthonormality checks shared by the tests below.
    fn assert_spectral(a: &CMatrix, eig: &EigenResult, tol: f64) {
        let n = a.rows();
        let v = &eig.eigenvectors;
        let mut lam = v.clone();
        for j in 0..n {
            for i in 0..n {
                let cur = lam.get(i, j);
                lam.set(i, j, cur * c(eig.eigenvalues[j], 0.0));
            }
        }
        let recon = lam.mul(&v.adjoint());
        let scale = a.fro_norm().max(1.0);
        assert!(
            recon.sub(a).fro_norm() <= tol * scale,
            "reconstruction residual {} over scale {}",
            recon.sub(a).fro_norm(),
            scale
        );
        let vv = v.adjoint().mul(v);
        assert!(vv.sub(&CMatrix::identity(n)).fro_norm() <= tol * (n as f64));
        for w in eig.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn identity_spectrum() {
        let a = CMatrix::identity(3);
        let eig = hermitian_eig(&a, DEFAULT_TOL).unwrap();
        for &v in &eig.eigenvalues {
            assert!((v - 1.0).abs() < 1e-14);
        }
        assert_spectral(&a, &eig, 1e-13);
    }

    #[test]
    fn real_diagonal_is_sorted() {
        let a = CMatrix::diagonal(&[c(5.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]);
        let eig = hermitian_eig(&a, DEFAULT_TOL).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 2.0).abs() < 1e-14);
        assert!((eig.eigenvalues[2] - 5.0).abs() < 1e-14);
        assert_spectral(&a, &eig, 1e-13);
    }

    // 2x2 oracle: eigenvalues of a Hermitian [[a, b], [conj(b), d]] from the
    // quadratic formula, independent of the iterative path under test.
    fn two_by_two_oracle(a: f64, b: C64, d: f64) -> (f64, f64) {
        let tr = a + d;
        let det = a * d - b.norm_sqr();
        let disc = libm::sqrt(tr * tr - 4.0 * det);
        ((tr - disc) / 2.0, (tr + disc) / 2.0)
    }

    #[test]
    fn weighted_two_dim_operator_matches_quadratic_oracle() {
        // Hermitian [[1, sqrt(3)/2], [sqrt(3)/2, 5/2]]; this spectrum is
        // reused by the frame-level tests downstream.
        let b = libm::sqrt(3.0) / 2.0;
        let a = CMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(b, 0.0), c(b, 0.0), c(2.5, 0.0)],
        )
        .unwrap();
        let eig = hermitian_eig(&a, DEFAULT_TOL).unwrap();
        let (lo, hi) = two_by_two_oracle(1.0, c(b, 0.0), 2.5);
        assert!((eig.eigenvalues[0] - lo).abs() < 1e-13);
        assert!((eig.eigenvalues[1] - hi).abs() < 1e-13);
        // Frozen reference values for the same spectrum.
        assert!((eig.eigenvalues[0] - 0.60435607626104).abs() < 1e-11);
        assert!((eig.eigenvalues[1] - 2.89564392373896).abs() < 1e-11);
        assert_spectral(&a, &eig, 1e-13);
    }

    #[test]
    fn complex_off_diagonal() {
        let a = CMatrix::new(
            2,
            2,
            vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)],
        )
        .unwrap();
        let eig = hermitian_eig(&a, DEFAULT_TOL).unwrap();
        let (lo, hi) = two_by_two_oracle(2.0, c(0.0, 1.0), 2.0);
        assert!((eig.eigenvalues[0] - lo).abs() < 1e-13);
        assert!((eig.eigenvalues[1] - hi).abs() < 1e-13);
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-13);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-13);
        assert_spectral(&a, &eig, 1e-13);
    }

    #[test]
    fn repeated_eigenvalues() {
        let mut a = CMatrix::zeros(4, 4);
        a.set(0, 0, c(1.0, 0.0));
        a.set(1, 1, c(1.0, 0.0));
        a.set(2, 2, c(3.0, 0.0));
        a.set(2, 3, c(1.0, 0.0));
        a.set(3, 2, c(1.0, 0.0));
        a.set(3, 3, c(3.0, 0.0));
        let eig = hermitian_eig(&a, DEFAULT_TOL).unwrap();
        let expect = [1.0, 1.0, 2.0, 4.0];
        for (got, want) in eig.eigenvalues.iter().zip(expect) {
            assert!((got - want).abs() < 1e-13);
        }
        assert_spectral(&a, &eig, 1e-13);
    }

    #[test]
    fn dense_hermitian_reconstructs() {
        // Deterministic pseudo-random Hermitian matrix, n = 12.
        let n = 12;
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let mut a = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                if i == j {
                    a.set(i, j, c(next() * 4.0, 0.0));
                } else {
                    let z = c(next(), next());
                    a.set(i, j, z);
                    a.set(j, i, z.conj());
                }
            }
        }
        let eig = hermitian_eig(&a, DEFAULT_TOL).unwrap();
        assert_spectral(&a, &eig, 1e-12);
        let tr: f64 = (0..n).map(|i| a.get(i, i).re).sum();
        let sum: f64 = eig.eigenvalues.iter().sum();
        assert!((tr - sum).abs() < 1e-11 * tr.abs().max(1.0));
    }

    #[test]
    fn one_by_one() {
        let a = CMatrix::diagonal(&[c(-3.5, 0.0)]);
        let eig = hermitian_eig(&a, DEFAULT_TOL).unwrap();
        assert_eq!(eig.eigenvalues, vec![-3.5]);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let mut a = CMatrix::identity(2);
        a.set(0, 1, c(0.5, 0.0));
        assert!(matches!(
            hermitian_eig(&a, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(
            hermitian_eig(&rect, DEFAULT_TOL),
            Err(Error::DimMismatch { .. })
        ));
    }
}
