//! Fixtures shared by the unit tests.

use alloc::vec;

use crate::frames::{Frame, WeightSeq};
use crate::linalg::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Three-element Parseval frame in dimension 2 (Mercedes-Benz layout):
/// (2/sqrt(6), 0), (-1/sqrt(6), 1/sqrt(2)), (-1/sqrt(6), -1/sqrt(2)).
pub fn mercedes() -> Frame {
    let s6 = libm::sqrt(6.0);
    let s2 = libm::sqrt(2.0);
    Frame::from_elements(
        2,
        &[
            vec![c(2.0 / s6, 0.0), c(0.0, 0.0)],
            vec![c(-1.0 / s6, 0.0), c(1.0 / s2, 0.0)],
            vec![c(-1.0 / s6, 0.0), c(-1.0 / s2, 0.0)],
        ],
    )
    .unwrap()
}

/// Amplitudes (1/2, 1, 2) attached to the Mercedes frame; the weighted
/// frame operator is [[1, sqrt(3)/2], [sqrt(3)/2, 5/2]] with spectrum
/// {0.60435607626104, 2.89564392373896}.
pub fn mercedes_weights() -> WeightSeq {
    WeightSeq::from_moduli(&[0.5, 1.0, 2.0]).unwrap()
}

pub fn weighted_mercedes() -> Frame {
    mercedes().apply_weights(&mercedes_weights()).unwrap()
}

pub const MERCEDES_WEIGHTED_LOWER: f64 = 0.60435607626104;
pub const MERCEDES_WEIGHTED_UPPER: f64 = 2.89564392373896;
