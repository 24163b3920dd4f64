//! Finite-dimensional frame analysis over complex vector spaces.
//!
//! The crate is split by concern:
//!
//! * [`linalg`]: dense complex matrices, Hermitian eigendecomposition,
//!   Cholesky solves, operator square roots and pseudo-inverses.
//! * [`frames`]: frame sequences, frame/Gram operators, optimal bounds,
//!   canonical duals, weights and multipliers.
//! * [`controlled`]: controlled frame verification, bound arithmetic,
//!   Neumann and frame-algorithm inversion, preconditioning reports.
//! * [`weighting`]: frame-tightening weight schemes and the randomized
//!   tightening experiment.
//! * [`gabor`]: discrete Gabor systems, window generators, weighted duals
//!   and the associated error studies.
//!
//! Everything is `no_std` + `alloc`; scalar math goes through `libm`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod controlled;
pub mod error;
pub mod frames;
pub mod gabor;
pub mod linalg;
#[cfg(test)]
pub(crate) mod testutil;
pub mod weighting;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};

/// Relative tolerance used by every operation that does not take an explicit one.
pub const DEFAULT_TOL: f64 = 1e-10;
