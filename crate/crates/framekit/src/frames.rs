//! Finite frames: sequences of vectors, their operators, bounds, duals,
//! weights and multipliers.
//!
//! A frame is stored through its synthesis matrix, the `dim x count`
//! matrix whose columns are the frame elements. Sequences that fail the
//! frame condition are still representable; operations that require the
//! frame property check it and report `NotAFrame` with the offending
//! lower bound.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, CMatrix, Cholesky, C64};

/// Sequence of `count` vectors in complex dimension `dim`, kept as the
/// columns of its synthesis matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Frame {
    synthesis: CMatrix,
}

/// Lower and upper bounds for a sequence, with a flag recording whether
/// they are the optimal (tightest) ones.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub optimal: bool,
}

impl FrameBounds {
    /// Frame status at relative tolerance `tol`: the lower bound must be
    /// bounded away from zero relative to the upper bound.
    pub fn is_frame(&self, tol: f64) -> bool {
        self.lower > tol * self.upper
    }
}

/// Result of testing whether two sequences form a dual pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityCheck {
    pub is_dual: bool,
    /// `||second * first^adj - I||_F`.
    pub residual: f64,
}

/// Modulus range of a semi-normalized weight sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiNormalizedBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Complex weight sequence attached elementwise to a frame.
#[derive(Clone, PartialEq, Debug)]
pub struct WeightSeq {
    weights: Vec<C64>,
}

impl WeightSeq {
    pub fn new(weights: Vec<C64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter {
                what: "weight sequence must be non-empty",
            });
        }
        if !weights.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(WeightSeq { weights })
    }

    /// Real nonnegative weights given by their moduli.
    pub fn from_moduli(moduli: &[f64]) -> Result<Self> {
        WeightSeq::new(moduli.iter().map(|&m| C64::new(m, 0.0)).collect())
    }

    pub fn constant(value: C64, len: usize) -> Self {
        WeightSeq {
            weights: alloc::vec![value; len.max(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, n: usize) -> C64 {
        self.weights[n]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.weights
    }

    /// Squared moduli `|w_n|^2`, the linear weights acting on rank-one
    /// terms of the weighted frame operator.
    pub fn energies(&self) -> Vec<f64> {
        self.weights.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Elementwise reciprocal; requires semi-normalization at `tol` so no
    /// modulus is at or below the tolerance.
    pub fn inverted(&self, tol: f64) -> Result<WeightSeq> {
        match self.check_semi_normalized(tol) {
            Some(_) => Ok(WeightSeq {
                weights: self.weights.iter().map(|z| z.inv()).collect()},
            ),
            None => {
                let min = self.min_modulus();
                Err(Error::NotSemiNormalized { min_modulus: min })
            }
        }
    }

    fn min_modulus(&self) -> f64 {
        self.weights
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Modulus bounds `lower <= |w_n| <= upper`, or `None` when some
    /// modulus is at or below `tol` (failure marker, not an error).
    pub fn check_semi_normalized(&self, tol: f64) -> Option<SemiNormalizedBounds> {
        let mut lower = f64::INFINITY;
        let mut upper = 0.0f64;
        for z in &self.weights {
            let m = z.norm();
            lower = lower.min(m);
            upper = upper.max(m);
        }
        if lower <= tol {
            None
        } else {
            Some(SemiNormalizedBounds { lower, upper })
        }
    }
}

impl Frame {
    /// Wraps a synthesis matrix whose columns are the frame elements.
    pub fn new(synthesis: CMatrix) -> Result<Self> {
        if !synthesis.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Frame { synthesis })
    }

    /// Builds a frame from explicit element vectors.
    pub fn from_elements(dim: usize, elements: &[Vec<C64>]) -> Result<Self> {
        if dim == 0 || elements.is_empty() {
            return Err(Error::InvalidParameter {
                what: "frame needs dim >= 1 and at least one element",
            });
        }
        let mut synthesis = CMatrix::zeros(dim, elements.len());
        for (n, el) in elements.iter().enumerate() {
            if el.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    got: el.len(),
                });
            }
            synthesis.set_col(n, el);
        }
        Frame::new(synthesis)
    }

    pub fn dim(&self) -> usize {
        self.synthesis.rows()
    }

    pub fn count(&self) -> usize {
        self.synthesis.cols()
    }

    pub fn synthesis(&self) -> &CMatrix {
        &self.synthesis
    }

    pub fn element(&self, n: usize) -> Vec<C64> {
        self.synthesis.col(n)
    }

    /// Gram matrix `Phi* Phi` (count x count).
    pub fn gram(&self) -> CMatrix {
        self.synthesis.adjoint().mul(&self.synthesis)
    }

    /// Frame operator `Phi Phi*` (dim x dim); Hermitian positive
    /// semi-definite by construction.
    pub fn frame_operator(&self) -> CMatrix {
        self.synthesis.mul(&self.synthesis.adjoint())
    }

    /// Optimal frame bounds: the extreme eigenvalues of the frame
    /// operator, clamped at zero against rounding. Works on any sequence;
    /// combine with [`FrameBounds::is_frame`] for the frame status.
    pub fn optimal_bounds(&self, tol: f64) -> Result<FrameBounds> {
        let op = self.frame_operator();
        let eig = hermitian_eig(&op, tol.max(1e-12))?;
        let lower = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
        let upper = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
        Ok(FrameBounds {
            lower,
            upper,
            optimal: true,
        })
    }

    /// Ratio of optimal upper to lower bound; requires the frame property.
    pub fn condition_number(&self, tol: f64) -> Result<f64> {
        let b = self.optimal_bounds(tol)?;
        if !b.is_frame(tol) {
            return Err(Error::NotAFrame { lower: b.lower });
        }
        Ok(b.upper / b.lower)
    }

    /// Canonical dual frame: each element is the inverse frame operator
    /// applied to the original element, computed as one positive definite
    /// factorization plus a solve per element.
    pub fn canonical_dual(&self, tol: f64) -> Result<Frame> {
        let bounds = self.optimal_bounds(tol)?;
        if !bounds.is_frame(tol) {
            return Err(Error::NotAFrame {
                lower: bounds.lower,
            });
        }
        let op = self.frame_operator();
        let chol = Cholesky::new(&op, tol)?;
        let dual_synthesis = chol.solve_matrix(&self.synthesis)?;
        Frame::new(dual_synthesis)
    }

    /// Elementwise weighting: element `n` becomes `w_n * psi_n`.
    pub fn apply_weights(&self, weights: &WeightSeq) -> Result<Frame> {
        if weights.len() != self.count() {
            return Err(Error::LengthMismatch {
                expected: self.count(),
                got: weights.len(),
            });
        }
        let mut synthesis = self.synthesis.clone();
        for n in 0..self.count() {
            let w = weights.get(n);
            for i in 0..self.dim() {
                let cur = synthesis.get(i, n);
                synthesis.set(i, n, cur * w);
            }
        }
        Frame::new(synthesis)
    }
}

/// Frame multiplier: coefficients against `analysis`, scaled by `symbol`,
/// synthesized with `synthesis`; the matrix `Phi diag(m) Psi*`.
pub fn multiplier(symbol: &[C64], analysis: &Frame, synthesis: &Frame) -> Result<CMatrix> {
    if analysis.dim() != synthesis.dim() {
        return Err(Error::DimMismatch { op: "multiplier" });
    }
    if analysis.count() != synthesis.count() {
        return Err(Error::DimMismatch { op: "multiplier" });
    }
    if symbol.len() != analysis.count() {
        return Err(Error::LengthMismatch {
            expected: analysis.count(),
            got: symbol.len(),
        });
    }
    if !symbol.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    // Phi diag(m) computed by column scaling, then times Psi*.
    let mut scaled = synthesis.synthesis().clone();
    for n in 0..scaled.cols() {
        let m = symbol[n];
        for i in 0..scaled.rows() {
            let cur = scaled.get(i, n);
            scaled.set(i, n, cur * m);
        }
    }
    Ok(scaled.mul(&analysis.synthesis().adjoint()))
}

/// Tests whether `second` is a dual of `first`: whether
/// `second * first^adj = I`. The threshold scales with `||I||_F`.
pub fn check_dual_pair(first: &Frame, second: &Frame, tol: f64) -> Result<DualityCheck> {
    if first.dim() != second.dim() || first.count() != second.count() {
        return Err(Error::DimMismatch { op: "check_dual_pair" });
    }
    let d = first.dim();
    let prod = second.synthesis().mul(&first.synthesis().adjoint());
    let residual = prod.sub(&CMatrix::identity(d)).fro_norm();
    Ok(DualityCheck {
        is_dual: residual <= tol * libm::sqrt(d as f64),
        residual,
    })
}
