//! Error type shared across the crate.

use thiserror::Error;

/// Failure modes of frame and operator computations.
///
/// Tolerance-gated checks report the measured quantity so callers can see
/// how far an input was from satisfying a precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix expected to be Hermitian was not, up to the given relative tolerance.
    #[error("matrix is not Hermitian: relative asymmetry {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },
    /// A non-finite entry (NaN or infinity) was encountered.
    #[error("non-finite entry encountered")]
    NonFinite,
    /// A matrix expected to be positive semi-definite had a significantly negative eigenvalue.
    #[error("matrix is not positive semi-definite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },
    /// A matrix expected to be positive definite was singular or indefinite.
    #[error("matrix is not positive definite")]
    NotPd,
    /// Two objects that must share a length did not.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    /// Matrix or frame dimensions were incompatible for the requested operation.
    #[error("dimension mismatch in {op}")]
    DimMismatch { op: &'static str },
    /// A sequence required to be a frame was not: its lower bound is below threshold.
    #[error("sequence is not a frame: optimal lower bound {lower:.3e}")]
    NotAFrame { lower: f64 },
    /// A weight sequence was not semi-normalized (some modulus at or below tolerance).
    #[error("weights are not semi-normalized: min modulus {min_modulus:.3e}")]
    NotSemiNormalized { min_modulus: f64 },
    /// The Neumann series cannot converge because the deviation from identity is too large.
    #[error("Neumann series does not converge: ||I - A|| = {norm:.6} >= 1")]
    NotContractive { norm: f64 },
    /// An operator expected to control the frame failed the controlled-frame check.
    #[error("operator does not control the frame")]
    NotControlled,
    /// Bound arithmetic received a non-positive or inverted bound pair.
    #[error("bounds must satisfy 0 < lower <= upper")]
    NonPositiveBounds,
    /// A frame element that must be nonzero had negligible norm.
    #[error("frame element {index} has negligible norm")]
    ZeroElement { index: usize },
    /// The multiplier weight scheme produced a significantly negative radicand.
    #[error("negative radicand {value:.3e} at index {index} in multiplier weights")]
    NegativeRadicand { index: usize, value: f64 },
    /// Random frame generation exhausted its retry budget without spanning.
    #[error("no spanning frame found after {retries} draws")]
    SpanFailure { retries: usize },
    /// Gabor lattice parameters do not divide the signal length.
    #[error("invalid lattice: steps ({a}, {b}) must be positive divisors of {d}")]
    InvalidLattice { d: usize, a: usize, b: usize },
    /// A weight mask block does not fit inside the lattice grid.
    #[error("mask block of side {side} exceeds lattice grid side {limit}")]
    MaskTooLarge { side: usize, limit: usize },
    /// A scalar parameter was outside its admissible range.
    #[error("invalid parameter: {what}")]
    InvalidParameter { what: &'static str },
    /// An iterative method failed to converge within its internal budget.
    #[error("iteration limit reached in {what}")]
    IterationLimit { what: &'static str },
}

pub type Result<T> = core::result::Result<T, Error>;
