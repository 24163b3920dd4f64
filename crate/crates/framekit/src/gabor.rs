//! Discrete Gabor systems on Z_d: lattices, window generators,
//! time-frequency atoms, masked weights and the two weighted-dual
//! constructions whose disagreement this module measures.
//!
//! The two constructions of a "weighted dual" differ by where the
//! weights enter: the true dual of the weighted system (weight, then
//! dualize) versus the inversely reweighted dual of the plain system
//! (dualize, then divide the weights out). With real weights they agree
//! on bases and drift apart with redundancy; `dual_gap` quantifies the
//! drift.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frames::{Frame, WeightSeq};
use crate::linalg::C64;

/// Separable time-frequency lattice: time step `a`, frequency step `b`,
/// both dividing the signal length `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaborLattice {
    d: usize,
    a: usize,
    b: usize,
}

impl GaborLattice {
    pub fn new(d: usize, a: usize, b: usize) -> Result<Self> {
        if d == 0 || a == 0 || b == 0 || d % a != 0 || d % b != 0 {
            return Err(Error::InvalidLattice { d, a, b });
        }
        Ok(GaborLattice { d, a, b })
    }

    pub fn signal_len(&self) -> usize {
        self.d
    }

    pub fn time_step(&self) -> usize {
        self.a
    }

    pub fn freq_step(&self) -> usize {
        self.b
    }

    /// Number of time shifts `d / a`.
    pub fn time_shifts(&self) -> usize {
        self.d / self.a
    }

    /// Number of frequency shifts `d / b`.
    pub fn freq_shifts(&self) -> usize {
        self.d / self.b
    }

    pub fn atom_count(&self) -> usize {
        self.time_shifts() * self.freq_shifts()
    }

    /// Oversampling ratio `d / (a b)`; below one the system cannot span.
    pub fn redundancy(&self) -> f64 {
        self.d as f64 / (self.a * self.b) as f64
    }

    /// Flat atom index for time shift `k`, frequency shift `l`.
    pub fn atom_index(&self, k: usize, l: usize) -> usize {
        k * self.freq_shifts() + l
    }
}

/// Cyclic shift: output `n` holds input `(n - shift) mod d`.
pub fn translate(x: &[C64], shift: i64) -> Vec<C64> {
    let d = x.len() as i64;
    (0..d).map(|n| x[(n - shift).rem_euclid(d) as usize]).collect()
}

/// Pointwise modulation by the character `exp(2 pi i freq n / d)`.
pub fn modulate(x: &[C64], freq: i64) -> Vec<C64> {
    let d = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(n, &v)| {
            let phase = 2.0 * core::f64::consts::PI * (freq as f64) * (n as f64) / d;
            v * C64::new(libm::cos(phase), libm::sin(phase))
        })
        .collect()
}

/// Window shapes on Z_d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WindowKind {
    Gauss,
    Hann,
    Bartlett,
    Blackman,
    Bspline3,
    Bspline5,
}

impl WindowKind {
    pub const ALL: [WindowKind; 6] = [
        WindowKind::Gauss,
        WindowKind::Hann,
        WindowKind::Bartlett,
        WindowKind::Blackman,
        WindowKind::Bspline3,
        WindowKind::Bspline5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WindowKind::Gauss => "gauss",
            WindowKind::Hann => "hann",
            WindowKind::Bartlett => "bartlett",
            WindowKind::Blackman => "blackman",
            WindowKind::Bspline3 => "bspline3",
            WindowKind::Bspline5 => "bspline5",
        }
    }
}

impl core::fmt::Display for WindowKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss" => Ok(WindowKind::Gauss),
            "hann" => Ok(WindowKind::Hann),
            "bartlett" => Ok(WindowKind::Bartlett),
            "blackman" => Ok(WindowKind::Blackman),
            "bspline3" => Ok(WindowKind::Bspline3),
            "bspline5" => Ok(WindowKind::Bspline5),
            _ => Err(Error::InvalidParameter {
                what: "unknown window kind",
            }),
        }
    }
}

/// Window shape plus length, with the Gaussian width parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub len: usize,
    /// Width of the Gaussian (variance scale); ignored by other kinds.
    pub width: f64,
    /// FIR support: the window is sampled on this many leading points
    /// and is zero on the rest. `None` means the full length. The
    /// periodized Gaussian has no FIR form and rejects a support.
    pub support: Option<usize>,
}

impl WindowSpec {
    pub fn new(kind: WindowKind, len: usize) -> Self {
        WindowSpec {
            kind,
            len,
            width: 1.0,
            support: None,
        }
    }

    pub fn with_width(mut self, width: f64) -> Self {
        self.width = width;
        self
    }

    pub fn with_support(mut self, support: usize) -> Self {
        self.support = Some(support);
        self
    }
}

/// Number of wrap terms on each side of the periodized Gaussian.
const GAUSS_PERIODIZATION_TERMS: i64 = 10;

/// Cardinal B-spline of order `m` (support `[0, m]`, degree `m - 1`).
fn cardinal_bspline(m: u32, x: f64) -> f64 {
    if m == 1 {
        return if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 };
    }
    let deg = (m - 1) as f64;
    (x / deg) * cardinal_bspline(m - 1, x) + ((m as f64 - x) / deg) * cardinal_bspline(m - 1, x - 1.0)
}

/// Samples the window shape on its support, zero-extends to `len`, and
/// normalizes to unit energy.
pub fn make_window(spec: &WindowSpec) -> Result<Vec<f64>> {
    let d = spec.len;
    if d == 0 {
        return Err(Error::InvalidParameter {
            what: "window length must be at least 1",
        });
    }
    let s = spec.support.unwrap_or(d);
    if s == 0 || s > d {
        return Err(Error::InvalidParameter {
            what: "window support must fit inside the length",
        });
    }
    if spec.kind == WindowKind::Gauss {
        if !(spec.width > 0.0 && spec.width.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "gaussian width must be positive",
            });
        }
        if s != d {
            return Err(Error::InvalidParameter {
                what: "the periodized gaussian has no FIR support",
            });
        }
    }
    let sf = s as f64;
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut g = vec![0.0; d];
    for (n, slot) in g.iter_mut().enumerate().take(s) {
        let nf = n as f64;
        *slot = match spec.kind {
            WindowKind::Gauss => {
                let mut acc = 0.0;
                for j in -GAUSS_PERIODIZATION_TERMS..=GAUSS_PERIODIZATION_TERMS {
                    let t = nf + (j as f64) * sf;
                    acc += libm::exp(-core::f64::consts::PI * t * t / (spec.width * sf));
                }
                acc
            }
            WindowKind::Hann => 0.5 - 0.5 * libm::cos(two_pi * nf / sf),
            WindowKind::Bartlett => 1.0 - libm::fabs(2.0 * nf / sf - 1.0),
            WindowKind::Blackman => {
                0.42 - 0.5 * libm::cos(two_pi * nf / sf) + 0.08 * libm::cos(2.0 * two_pi * nf / sf)
            }
            WindowKind::Bspline3 => cardinal_bspline(3, 3.0 * nf / sf),
            WindowKind::Bspline5 => cardinal_bspline(5, 5.0 * nf / sf),
        };
    }
    let mut energy = 0.0;
    for &v in &g {
        energy += v * v;
    }
    let norm = libm::sqrt(energy);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidParameter {
            what: "window is identically zero at this length",
        });
    }
    for v in &mut g {
        *v /= norm;
    }
    Ok(g)
}

/// Gabor system of the window over the lattice: atom `(k, l)` is the
/// `l b`-fold modulation of the `k a`-fold translation of the window,
/// at flat index `k * (d/b) + l`.
pub fn gabor_frame(window: &[f64], lattice: &GaborLattice) -> Result<Frame> {
    if window.len() != lattice.signal_len() {
        return Err(Error::LengthMismatch {
            expected: lattice.signal_len(),
            got: window.len(),
        });
    }
    if !window.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let base: Vec<C64> = window.iter().map(|&v| C64::new(v, 0.0)).collect();
    let d = lattice.signal_len();
    let mut synthesis = crate::linalg::CMatrix::zeros(d, lattice.atom_count());
    for k in 0..lattice.time_shifts() {
        let shifted = translate(&base, (k * lattice.time_step()) as i64);
        for l in 0..lattice.freq_shifts() {
            let atom = modulate(&shifted, (l * lattice.freq_step()) as i64);
            synthesis.set_col(lattice.atom_index(k, l), &atom);
        }
    }
    Frame::new(synthesis)
}

/// Rectangular wrap-around weight mask on the lattice grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaskSpec {
    /// Half-width `p`: the block spans indices `-p..=p` around the
    /// grid origin, cyclically.
    pub half_width: usize,
    /// Amplitude on the block; everywhere else the weight is one.
    pub amp: f64,
}

impl MaskSpec {
    pub fn new(half_width: usize, amp: f64) -> Result<Self> {
        if !(amp > 0.0 && amp.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "mask amplitude must be positive",
            });
        }
        Ok(MaskSpec { half_width, amp })
    }
}

fn in_wrapped_block(index: usize, extent: usize, half_width: usize) -> bool {
    index <= half_width || index >= extent - half_width
}

/// Per-atom weights: `amp` on the `(2p+1) x (2p+1)` wrap-around block of
/// grid indices around the origin, one elsewhere.
pub fn mask_weights(lattice: &GaborLattice, mask: &MaskSpec) -> Result<WeightSeq> {
    let side = 2 * mask.half_width + 1;
    let limit = lattice.time_shifts().min(lattice.freq_shifts());
    if side > limit {
        return Err(Error::MaskTooLarge { side, limit });
    }
    let mut weights = vec![C64::new(1.0, 0.0); lattice.atom_count()];
    let p = mask.half_width;
    for k in 0..lattice.time_shifts() {
        if !in_wrapped_block(k, lattice.time_shifts(), p) {
            continue;
        }
        for l in 0..lattice.freq_shifts() {
            if in_wrapped_block(l, lattice.freq_shifts(), p) {
                weights[lattice.atom_index(k, l)] = C64::new(mask.amp, 0.0);
            }
        }
    }
    WeightSeq::new(weights)
}

/// Dual of the weighted system: weight the atoms, then take the
/// canonical dual.
pub fn dual_weighted(frame: &Frame, weights: &WeightSeq, tol: f64) -> Result<Frame> {
    if weights.check_semi_normalized(tol).is_none() {
        return Err(Error::NotSemiNormalized {
            min_modulus: weights
                .as_slice()
                .iter()
                .map(|z| z.norm())
                .fold(f64::INFINITY, f64::min),
        });
    }
    frame.apply_weights(weights)?.canonical_dual(tol)
}

/// Inversely weighted dual: take the canonical dual of the plain system,
/// then divide the weights out elementwise.
pub fn inverse_weighted_dual(frame: &Frame, weights: &WeightSeq, tol: f64) -> Result<Frame> {
    let inverted = weights.inverted(tol)?;
    frame.canonical_dual(tol)?.apply_weights(&inverted)
}

/// Relative Frobenius gap between the two weighted-dual constructions:
/// `||iwd - dw||_F / ||dw||_F`.
pub fn dual_gap(frame: &Frame, weights: &WeightSeq, tol: f64) -> Result<f64> {
    let dw = dual_weighted(frame, weights, tol)?;
    let iwd = inverse_weighted_dual(frame, weights, tol)?;
    let denom = dw.synthesis().fro_norm();
    Ok(iwd.synthesis().sub(dw.synthesis()).fro_norm() / denom)
}

/// One measured disagreement between the weighted-dual constructions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualErrorReport {
    pub lattice: GaborLattice,
    pub window: WindowSpec,
    pub mask: MaskSpec,
    pub epsilon: f64,
    pub redundancy: f64,
}

/// Builds the Gabor system for `window` over `lattice`, masks it with
/// `mask`, and measures the weighted-dual gap.
pub fn dual_error(
    window: &WindowSpec,
    lattice: &GaborLattice,
    mask: &MaskSpec,
    tol: f64,
) -> Result<DualErrorReport> {
    let g = make_window(window)?;
    let frame = gabor_frame(&g, lattice)?;
    let weights = mask_weights(lattice, mask)?;
    let epsilon = dual_gap(&frame, &weights, tol)?;
    Ok(DualErrorReport {
        lattice: *lattice,
        window: *window,
        mask: *mask,
        epsilon,
        redundancy: lattice.redundancy(),
    })
}

/// Frame-bound ratios (condition numbers) for a grid of windows and
/// lattices; cells where the system is not a frame are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundRatioTable {
    pub windows: Vec<WindowSpec>,
    pub lattices: Vec<GaborLattice>,
    /// Indexed `[lattice][window]`.
    pub ratios: Vec<Vec<Option<f64>>>,
}

pub fn bound_ratio_table(
    windows: &[WindowSpec],
    lattices: &[GaborLattice],
    tol: f64,
) -> Result<BoundRatioTable> {
    let mut ratios = Vec::with_capacity(lattices.len());
    for lattice in lattices {
        let mut row = Vec::with_capacity(windows.len());
        for spec in windows {
            let g = make_window(spec)?;
            let frame = gabor_frame(&g, lattice)?;
            match frame.condition_number(tol) {
                Ok(r) => row.push(Some(r)),
                Err(Error::NotAFrame { .. }) => row.push(None),
                Err(e) => return Err(e),
            }
        }
        ratios.push(row);
    }
    Ok(BoundRatioTable {
        windows: windows.to_vec(),
        lattices: lattices.to_vec(),
        ratios,
    })
}

/// Least-squares line through `(x, y)` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits `y = slope x + intercept`; `None` when fewer than two distinct
/// abscissae are available. A perfectly flat dataset fits exactly.
pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res = syy - slope * sxy;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        1.0 - (ss_res / syy).max(0.0)
    };
    Some(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// One sweep cell: the dual gap of a lattice at a mask half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepCell {
    pub lattice: GaborLattice,
    pub half_width: usize,
    /// `None` when the masked or plain system fails to be a frame or the
    /// mask does not fit this lattice.
    pub epsilon: Option<f64>,
}

/// Dual-gap growth against mask size, per lattice, with a line fit.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub window: WindowSpec,
    pub amp: f64,
    /// Lattice-major, half-widths in the order given.
    pub cells: Vec<SweepCell>,
    pub fits: Vec<(GaborLattice, Option<LineFit>)>,
}

/// Measures the dual gap over `lattices x half_widths` at a fixed mask
/// amplitude. The plain dual is computed once per lattice and reused
/// across mask sizes.
pub fn block_size_sweep(
    window: &WindowSpec,
    lattices: &[GaborLattice],
    half_widths: &[usize],
    amp: f64,
    tol: f64,
) -> Result<SweepReport> {
    if half_widths.is_empty() {
        return Err(Error::InvalidParameter {
            what: "sweep needs at least one mask half-width",
        });
    }
    let mut cells = Vec::with_capacity(lattices.len() * half_widths.len());
    let mut fits = Vec::with_capacity(lattices.len());
    for lattice in lattices {
        let g = make_window(window)?;
        let frame = gabor_frame(&g, lattice)?;
        let plain_dual = match frame.canonical_dual(tol) {
            Ok(dual) => Some(dual),
            Err(Error::NotAFrame { .. }) => None,
            Err(e) => return Err(e),
        };
        let mut points = Vec::new();
        for &p in half_widths {
            let epsilon = match (&plain_dual, MaskSpec::new(p, amp)) {
                (Some(dual), Ok(mask)) => match mask_weights(lattice, &mask) {
                    Ok(weights) => {
                        let dw = match dual_weighted(&frame, &weights, tol) {
                            Ok(dw) => Some(dw),
                            Err(Error::NotAFrame { .. }) => None,
                            Err(e) => return Err(e),
                        };
                        dw.map(|dw| {
                            let iwd = dual
                                .apply_weights(&weights.inverted(tol).expect("positive mask"))
                                .expect("length preserved");
                            iwd.synthesis().sub(dw.synthesis()).fro_norm()
                                / dw.synthesis().fro_norm()
                        })
                    }
                    Err(Error::MaskTooLarge { .. }) => None,
                    Err(e) => return Err(e),
                },
                (None, _) => None,
                (_, Err(e)) => return Err(e),
            };
            if let Some(eps) = epsilon {
                points.push((p as f64, eps));
            }
            cells.push(SweepCell {
                lattice: *lattice,
                half_width: p,
                epsilon,
            });
        }
        fits.push((*lattice, fit_line(&points)));
    }
    Ok(SweepReport {
        window: *window,
        amp,
        cells,
        fits,
    })
}
