//! Controlled frames: verification, bound arithmetic, series and iterative
//! inversion, and preconditioning diagnostics.
//!
//! A controller is an invertible operator `C`; the sequence is controlled
//! by `C` when `C L` (with `L` the frame operator) is a positive,
//! self-adjoint, boundedly invertible operator. For self-adjoint `C` this
//! is equivalent to: the sequence is a frame, `C` is positive definite,
//! and `C` commutes with `L`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::{
    hermitian_eig, singular_range, spectral_norm, vec_norm, vec_sub, CMatrix, Cholesky, C64,
};

/// Invertible operator acting on the frame's ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct Controller {
    matrix: CMatrix,
}

impl Controller {
    /// Wraps a square matrix, verifying invertibility: the smallest
    /// singular value must exceed `tol` times the largest.
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimMismatch { op: "controller" });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let (smallest, largest) = singular_range(&matrix)?;
        if largest <= 0.0 || smallest <= tol * largest {
            return Err(Error::InvalidParameter {
                what: "controller must be invertible",
            });
        }
        Ok(Controller { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Controller {
            matrix: CMatrix::identity(dim),
        }
    }

    /// The inverse frame operator as a controller; the canonical choice
    /// that makes the controlled operator the identity.
    pub fn inverse_frame_operator(frame: &Frame, tol: f64) -> Result<Self> {
        let bounds = frame.optimal_bounds(tol)?;
        if !bounds.is_frame(tol) {
            return Err(Error::NotAFrame {
                lower: bounds.lower,
            });
        }
        let op = frame.frame_operator();
        let inv = Cholesky::new(&op, tol)?.solve_matrix(&CMatrix::identity(frame.dim()))?;
        Ok(Controller { matrix: inv })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// Outcome of the controlled-frame verification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlledCheck {
    pub is_controlled: bool,
    /// Extreme eigenvalues of the Hermitian part of `C L`; they are the
    /// controlled frame bounds when the check passes.
    pub lower: f64,
    pub upper: f64,
    /// `||CL - (CL)*||_F / ||CL||_F`.
    pub hermiticity_residual: f64,
    /// `||CL - L C*||_F / ||CL||_F`; vanishes with the residual above
    /// because the frame operator is self-adjoint.
    pub commutation_residual: f64,
}

/// Verifies that `controller` controls the sequence: `C L` must be
/// Hermitian within `tol` and its Hermitian part positive definite
/// (smallest eigenvalue above `tol * ||C L||_F`).
pub fn check_controlled(
    frame: &Frame,
    controller: &Controller,
    tol: f64,
) -> Result<ControlledCheck> {
    if controller.dim() != frame.dim() {
        return Err(Error::DimMismatch { op: "check_controlled" });
    }
    let op = frame.frame_operator();
    let cl = controller.matrix().mul(&op);
    let norm = cl.fro_norm();
    if norm == 0.0 {
        return Ok(ControlledCheck {
            is_controlled: false,
            lower: 0.0,
            upper: 0.0,
            hermiticity_residual: 0.0,
            commutation_residual: 0.0,
        });
    }
    let hermiticity_residual = cl.hermitian_residual();
    let lc_adj = op.mul(&controller.matrix().adjoint());
    let commutation_residual = cl.sub(&lc_adj).fro_norm() / norm;
    let herm = cl.hermitian_part();
    let eig = hermitian_eig(&herm, 1e-6)?;
    let lower = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let upper = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let is_controlled = hermiticity_residual <= tol && lower > tol * norm;
    Ok(ControlledCheck {
        is_controlled,
        lower,
        upper,
        hermiticity_residual,
        commutation_residual,
    })
}

/// Multiplier controller from positive semi-normalized linear weights:
/// synthesis against the frame, symbol `w`, analysis against the
/// canonical dual. On a frame this always yields a controlled frame whose
/// controlled operator is the weighted frame operator.
pub fn diagonal_controller(frame: &Frame, weights: &[f64], tol: f64) -> Result<Controller> {
    if weights.len() != frame.count() {
        return Err(Error::LengthMismatch {
            expected: frame.count(),
            got: weights.len(),
        });
    }
    if !weights.iter().all(|w| w.is_finite()) {
        return Err(Error::NonFinite);
    }
    let min = weights.iter().fold(f64::INFINITY, |m, &w| m.min(w));
    if min <= tol {
        return Err(Error::NotSemiNormalized { min_modulus: min });
    }
    let dual = frame.canonical_dual(tol)?;
    let symbol: Vec<C64> = weights.iter().map(|&w| C64::new(w, 0.0)).collect();
    let matrix = crate::frames::multiplier(&symbol, &dual, frame)?;
    Controller::new(matrix, tol)
}

/// Largest relative deviation of `C psi_n` from `w_n psi_n` over the
/// frame elements. Zero exactly when every element is an eigenvector of
/// the controller; redundant frames generally leave it positive even
/// though the controller is diagonal in the multiplier sense.
pub fn eigen_action_residual(controller: &Controller, frame: &Frame, weights: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for n in 0..frame.count().min(weights.len()) {
        let el = frame.element(n);
        let norm = vec_norm(&el);
        if norm == 0.0 {
            continue;
        }
        let image = controller.matrix().mul_vec(&el);
        let scaled: Vec<C64> = el.iter().map(|z| z * C64::new(weights[n], 0.0)).collect();
        let dev = vec_norm(&vec_sub(&image, &scaled)) / norm;
        worst = worst.max(dev);
    }
    worst
}

fn checked_pair(b: (f64, f64)) -> Result<(f64, f64)> {
    if !(b.0 > 0.0 && b.1 >= b.0) {
        return Err(Error::NonPositiveBounds);
    }
    Ok(b)
}

/// Frame bounds implied by controlled bounds and controller bounds:
/// `(lower_cl / upper_c, upper_cl / lower_c)`.
pub fn frame_bounds_from_controlled(
    controlled: (f64, f64),
    controller: (f64, f64),
) -> Result<(f64, f64)> {
    let (m_cl, big_cl) = checked_pair(controlled)?;
    let (m_c, big_c) = checked_pair(controller)?;
    Ok((m_cl / big_c, big_cl / m_c))
}

/// Controller bounds implied by controlled bounds and frame bounds:
/// `(lower_cl / upper, upper_cl / lower)`.
pub fn controller_bounds_from_controlled(
    controlled: (f64, f64),
    frame: (f64, f64),
) -> Result<(f64, f64)> {
    let (m_cl, big_cl) = checked_pair(controlled)?;
    let (m, big) = checked_pair(frame)?;
    Ok((m_cl / big, big_cl / m))
}

/// Controlled bounds implied by frame bounds and controller bounds:
/// `(lower * lower_c, upper * upper_c)`.
pub fn controlled_bounds_from_parts(
    frame: (f64, f64),
    controller: (f64, f64),
) -> Result<(f64, f64)> {
    let (m, big) = checked_pair(frame)?;
    let (m_c, big_c) = checked_pair(controller)?;
    Ok((m * m_c, big * big_c))
}

/// Progress record of an iterative inversion or reconstruction.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationReport {
    /// Number of update steps actually taken.
    pub iterations: usize,
    /// Residuals per step, starting with the residual before any update.
    pub residual_history: Vec<f64>,
    /// Contraction factor promised by the bounds in play.
    pub predicted_rate: f64,
    /// Geometric mean contraction factor actually observed (zero when
    /// fewer than one step ran or the initial residual vanished).
    pub achieved_rate: f64,
}

fn geometric_rate(history: &[f64]) -> f64 {
    if history.len() < 2 || history[0] <= 0.0 {
        return 0.0;
    }
    let steps = (history.len() - 1) as f64;
    let last = history[history.len() - 1];
    if last <= 0.0 {
        return 0.0;
    }
    libm::pow(last / history[0], 1.0 / steps)
}

/// Truncated Neumann series for `A^{-1}`: partial sums of `(I - A)^k`.
///
/// Requires `||I - A|| < 1` in spectral norm; otherwise the series
/// cannot converge and `NotContractive` reports the norm. Iteration stops
/// once `||A S_k - I||_F <= tol` or after `max_iters` terms.
pub fn neumann_invert(
    a: &CMatrix,
    max_iters: usize,
    tol: f64,
) -> Result<(CMatrix, IterationReport)> {
    if !a.is_square() {
        return Err(Error::DimMismatch { op: "neumann_invert" });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.rows();
    let id = CMatrix::identity(n);
    let deviation = id.sub(a);
    let rate = spectral_norm(&deviation)?;
    if rate >= 1.0 {
        return Err(Error::NotContractive { norm: rate });
    }
    let mut sum = CMatrix::identity(n);
    let mut power = CMatrix::identity(n);
    let mut history = vec![a.mul(&sum).sub(&id).fro_norm()];
    let mut iterations = 0;
    while history[iterations] > tol && iterations < max_iters {
        power = deviation.mul(&power);
        sum = sum.add(&power);
        history.push(a.mul(&sum).sub(&id).fro_norm());
        iterations += 1;
    }
    let achieved = geometric_rate(&history);
    Ok((
        sum,
        IterationReport {
            iterations,
            residual_history: history,
            predicted_rate: rate,
            achieved_rate: achieved,
        },
    ))
}

/// Relaxed fixed-point reconstruction of `target` from its image under
/// the (optionally controlled) frame operator.
///
/// With bounds `(m, M)` of the positive operator `A` in play, iterates
/// `g <- g + 2/(m + M) A (target - g)` from zero; the error contracts by
/// `(M - m)/(M + m)` per step. Stops at `||target - g|| <= tol ||target||`
/// or after `max_iters` steps.
pub fn frame_algorithm(
    frame: &Frame,
    target: &[C64],
    controller: Option<&Controller>,
    max_iters: usize,
    tol: f64,
) -> Result<(Vec<C64>, IterationReport)> {
    if target.len() != frame.dim() {
        return Err(Error::LengthMismatch {
            expected: frame.dim(),
            got: target.len(),
        });
    }
    if !target.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let (op, lower, upper) = match controller {
        None => {
            let bounds = frame.optimal_bounds(tol)?;
            if !bounds.is_frame(tol) {
                return Err(Error::NotAFrame {
                    lower: bounds.lower,
                });
            }
            (frame.frame_operator(), bounds.lower, bounds.upper)
        }
        Some(c) => {
            let check = check_controlled(frame, c, tol)?;
            if !check.is_controlled {
                return Err(Error::NotControlled);
            }
            let cl = c.matrix().mul(&frame.frame_operator());
            (cl.hermitian_part(), check.lower, check.upper)
        }
    };
    let relax = C64::new(2.0 / (lower + upper), 0.0);
    let delta = (upper - lower) / (upper + lower);

    let scale = vec_norm(target);
    let mut approx = vec![C64::new(0.0, 0.0); target.len()];
    let mut history = vec![scale];
    let mut iterations = 0;
    while history[iterations] > tol * scale && iterations < max_iters {
        let err = vec_sub(target, &approx);
        let step = op.mul_vec(&err);
        for (g, s) in approx.iter_mut().zip(&step) {
            *g += relax * s;
        }
        history.push(vec_norm(&vec_sub(target, &approx)));
        iterations += 1;
    }
    if iterations >= 1 {
        // One-step contraction promised by the optimal bounds, with
        // rounding slack proportional to the data size.
        debug_assert!(history[1] <= delta * scale + tol * (1.0 + scale));
    }
    let achieved = geometric_rate(&history);
    Ok((
        approx,
        IterationReport {
            iterations,
            residual_history: history,
            predicted_rate: delta,
            achieved_rate: achieved,
        },
    ))
}

/// Condition numbers and contraction rates with and without a controller.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreconditionReport {
    pub kappa_plain: f64,
    pub kappa_controlled: f64,
    pub delta_plain: f64,
    pub delta_controlled: f64,
    /// Strict improvement of the controlled condition number.
    pub improved: bool,
}

/// Compares the frame operator's conditioning against the controlled
/// operator's. Requires a frame and a passing controlled check.
pub fn precondition_report(
    frame: &Frame,
    controller: &Controller,
    tol: f64,
) -> Result<PreconditionReport> {
    let bounds = frame.optimal_bounds(tol)?;
    if !bounds.is_frame(tol) {
        return Err(Error::NotAFrame {
            lower: bounds.lower,
        });
    }
    let check = check_controlled(frame, controller, tol)?;
    if !check.is_controlled {
        return Err(Error::NotControlled);
    }
    let kappa_plain = bounds.upper / bounds.lower;
    let kappa_controlled = check.upper / check.lower;
    Ok(PreconditionReport {
        kappa_plain,
        kappa_controlled,
        delta_plain: (bounds.upper - bounds.lower) / (bounds.upper + bounds.lower),
        delta_controlled: (check.upper - check.lower) / (check.upper + check.lower),
        improved: kappa_controlled < kappa_plain,
    })
}
