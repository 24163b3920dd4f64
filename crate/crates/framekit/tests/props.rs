//! Property tests over randomized inputs: algebraic identities of the
//! dense kernels and the frame-level laws that the unit suites check
//! only pointwise.

use framekit::controlled::{frame_algorithm, neumann_invert, Controller};
use framekit::frames::{check_dual_pair, multiplier, Frame, WeightSeq};
use framekit::gabor::{gabor_frame, make_window, GaborLattice, WindowKind, WindowSpec};
use framekit::linalg::{
    hermitian_eig, pseudo_inverse, singular_range, spectral_norm, Cholesky,
};
use framekit::weighting::{compute_weights, random_frame, WeightMethod, DEFAULT_SPREAD_TOL};
use framekit::{C64, CMatrix, DEFAULT_TOL};
use proptest::prelude::*;

fn cmatrix(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), r * c).prop_map(move |vals| {
            CMatrix::new(
                r,
                c,
                vals.into_iter().map(|(re, im)| C64::new(re, im)).collect(),
            )
            .unwrap()
        })
    })
}

/// Cyclic moduli so weight vectors track the frame size.
fn moduli_for(count: usize, pool: &[f64]) -> Vec<f64> {
    (0..count).map(|n| pool[n % pool.len()]).collect()
}

fn zero_last_row(frame: &Frame) -> Frame {
    let s = frame.synthesis();
    let killed = CMatrix::from_fn(s.rows(), s.cols(), |i, j| {
        if i + 1 == s.rows() {
            C64::new(0.0, 0.0)
        } else {
            s.get(i, j)
        }
    });
    Frame::new(killed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pseudo_inverse_satisfies_moore_penrose(a in cmatrix(5), dup in any::<bool>()) {
        let mut a = a;
        if dup && a.cols() >= 2 {
            let col = a.col(0);
            a.set_col(1, &col);
        }
        let p = pseudo_inverse(&a, DEFAULT_TOL).unwrap();
        let scale = a.fro_norm().max(1.0);
        let apa = a.mul(&p).mul(&a);
        let pap = p.mul(&a).mul(&p);
        prop_assert!(apa.sub(&a).fro_norm() <= 1e-8 * scale);
        prop_assert!(pap.sub(&p).fro_norm() <= 1e-8 * p.fro_norm().max(1.0));
        let ap = a.mul(&p);
        let pa = p.mul(&a);
        prop_assert!(ap.sub(&ap.adjoint()).fro_norm() <= 1e-8 * scale.max(p.fro_norm()));
        prop_assert!(pa.sub(&pa.adjoint()).fro_norm() <= 1e-8 * scale.max(p.fro_norm()));
    }

    #[test]
    fn singular_range_top_matches_spectral_norm(a in cmatrix(5)) {
        let (_, top) = singular_range(&a).unwrap();
        let norm = spectral_norm(&a).unwrap();
        prop_assert!((top - norm).abs() <= 1e-9 * norm.max(1.0));
        prop_assert!(top <= a.fro_norm() + 1e-9);
    }

    #[test]
    fn hermitian_sqrt_bridges_bounds(b in cmatrix(5)) {
        let t = b.adjoint().mul(&b);
        let s = framekit::linalg::hermitian_sqrt(&t, DEFAULT_TOL).unwrap();
        let scale = t.fro_norm().max(1.0);
        prop_assert!(s.mul(&s).sub(&t).fro_norm() <= 1e-8 * scale);
        let et = hermitian_eig(&t, DEFAULT_TOL).unwrap().eigenvalues;
        let es = hermitian_eig(&s, DEFAULT_TOL).unwrap().eigenvalues;
        for (lt, ls) in et.iter().zip(&es) {
            prop_assert!((lt - ls * ls).abs() <= 1e-8 * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dual_bounds_are_reciprocal(d in 2usize..6, extra in 1usize..6, seed in 0u64..1_000_000) {
        let Ok(frame) = random_frame(d, d + extra, seed, DEFAULT_SPREAD_TOL) else {
            return Ok(());
        };
        let bounds = frame.optimal_bounds(DEFAULT_TOL).unwrap();
        let dual = frame.canonical_dual(DEFAULT_TOL).unwrap();
        let dual_bounds = dual.optimal_bounds(DEFAULT_TOL).unwrap();
        prop_assert!((dual_bounds.lower - 1.0 / bounds.upper).abs() <= 1e-8 / bounds.upper);
        prop_assert!((dual_bounds.upper - 1.0 / bounds.lower).abs() <= 1e-8 / bounds.lower);
        let pair = check_dual_pair(&frame, &dual, 1e-8).unwrap();
        prop_assert!(pair.is_dual, "residual {}", pair.residual);
        // Dualizing twice returns to the original frame.
        let back = dual.canonical_dual(DEFAULT_TOL).unwrap();
        let diff = back.synthesis().sub(frame.synthesis()).fro_norm();
        prop_assert!(diff <= 1e-8 * frame.synthesis().fro_norm());
    }

    #[test]
    fn weighted_bounds_stay_in_envelope(
        d in 2usize..6,
        extra in 1usize..6,
        seed in 0u64..1_000_000,
        pool in prop::collection::vec(0.3f64..2.5, 1..8),
    ) {
        let Ok(frame) = random_frame(d, d + extra, seed, DEFAULT_SPREAD_TOL) else {
            return Ok(());
        };
        let moduli = moduli_for(frame.count(), &pool);
        let lo = moduli.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = moduli.iter().cloned().fold(0.0f64, f64::max);
        let bounds = frame.optimal_bounds(DEFAULT_TOL).unwrap();
        let weights = WeightSeq::from_moduli(&moduli).unwrap();
        let wb = frame.apply_weights(&weights).unwrap().optimal_bounds(DEFAULT_TOL).unwrap();
        let slack = 1e-9 * bounds.upper * hi * hi;
        prop_assert!(wb.lower >= lo * lo * bounds.lower - slack);
        prop_assert!(wb.upper <= hi * hi * bounds.upper + slack);
    }

    #[test]
    fn weight_schemes_commute_with_power_of_two_scaling(
        d in 2usize..5,
        extra in 1usize..5,
        seed in 0u64..1_000_000,
        log_scale in -3i32..4,
    ) {
        let Ok(frame) = random_frame(d, d + extra, seed, DEFAULT_SPREAD_TOL) else {
            return Ok(());
        };
        let factor = libm::pow(2.0, log_scale as f64);
        let scaled = Frame::new(frame.synthesis().scale(C64::new(factor, 0.0))).unwrap();
        for method in [WeightMethod::P2, WeightMethod::PInf] {
            let w = compute_weights(&frame, method, DEFAULT_TOL).unwrap();
            let ws = compute_weights(&scaled, method, DEFAULT_TOL).unwrap();
            // The schemes scale inversely with the frame, and powers of
            // two are exact in binary floating point.
            for (u, v) in w.as_slice().iter().zip(ws.as_slice()) {
                prop_assert_eq!(v.re, u.re / factor);
                prop_assert_eq!(v.im, 0.0);
            }
        }
    }

    #[test]
    fn frame_algorithm_contracts_at_predicted_rate(
        d in 2usize..5,
        extra in 1usize..5,
        seed in 0u64..1_000_000,
        target_pool in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..6),
    ) {
        let Ok(frame) = random_frame(d, d + extra, seed, DEFAULT_SPREAD_TOL) else {
            return Ok(());
        };
        let target: Vec<C64> = (0..d)
            .map(|n| {
                let (re, im) = target_pool[n % target_pool.len()];
                C64::new(re, im)
            })
            .collect();
        if target.iter().all(|z| z.norm() == 0.0) {
            return Ok(());
        }
        let (_, report) = frame_algorithm(&frame, &target, None, 8, 1e-14).unwrap();
        let scale = report.residual_history[0];
        let delta = report.predicted_rate;
        for (k, res) in report.residual_history.iter().enumerate() {
            let bound = libm::pow(delta, k as f64) * scale;
            prop_assert!(*res <= bound * (1.0 + 1e-9) + 1e-12, "step {k}: {res} > {bound}");
        }
    }

    #[test]
    fn neumann_series_inverts_scaled_operators(
        d in 2usize..5,
        extra in 1usize..5,
        seed in 0u64..1_000_000,
    ) {
        // Spread floor 0.1 keeps the condition number below 100 so the
        // series converges in a bounded number of terms.
        let Ok(frame) = random_frame(d, d + extra, seed, 0.1) else {
            return Ok(());
        };
        let bounds = frame.optimal_bounds(DEFAULT_TOL).unwrap();
        let a = frame
            .frame_operator()
            .scale(C64::new(1.0 / (1.02 * bounds.upper), 0.0));
        let (inv, _) = neumann_invert(&a, 6000, 1e-11).unwrap();
        let residual = inv.mul(&a).sub(&CMatrix::identity(d)).fro_norm();
        prop_assert!(residual <= 1e-6, "residual {residual}");
    }

    #[test]
    fn inverse_controller_solves_in_one_step(
        d in 2usize..5,
        extra in 1usize..5,
        seed in 0u64..1_000_000,
    ) {
        let Ok(frame) = random_frame(d, d + extra, seed, DEFAULT_SPREAD_TOL) else {
            return Ok(());
        };
        let c = Controller::inverse_frame_operator(&frame, DEFAULT_TOL).unwrap();
        let target: Vec<C64> = (0..d).map(|n| C64::new(1.0 + n as f64, -0.5)).collect();
        let (approx, report) = frame_algorithm(&frame, &target, Some(&c), 20, 1e-10).unwrap();
        prop_assert!(report.iterations <= 2, "iterations {}", report.iterations);
        let err: f64 = approx
            .iter()
            .zip(&target)
            .map(|(g, f)| (g - f).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let scale: f64 = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-9 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn six_frame_conditions_agree(
        d in 2usize..6,
        extra in 1usize..5,
        seed in 0u64..1_000_000,
        kill in any::<bool>(),
        pool in prop::collection::vec(0.3f64..2.5, 1..8),
        pool2 in prop::collection::vec(0.3f64..2.5, 1..8),
    ) {
        let Ok(base) = random_frame(d, d + extra, seed, DEFAULT_SPREAD_TOL) else {
            return Ok(());
        };
        let frame = if kill { zero_last_row(&base) } else { base };
        let m = frame.count();
        let w = moduli_for(m, &pool).iter().map(|v| v * v).collect::<Vec<_>>();
        let w2 = moduli_for(m, &pool2).iter().map(|v| v * v).collect::<Vec<_>>();

        let tol = DEFAULT_TOL;
        let sym: Vec<C64> = w.iter().map(|&v| C64::new(v, 0.0)).collect();
        let sym2: Vec<C64> = w2.iter().map(|&v| C64::new(v, 0.0)).collect();
        let m_op = multiplier(&sym, &frame, &frame).unwrap().hermitian_part();
        let m_op2 = multiplier(&sym2, &frame, &frame).unwrap().hermitian_part();

        let c1 = frame.optimal_bounds(tol).unwrap().is_frame(tol);
        // Positive and invertible via a pivoted factorization.
        let c2 = Cholesky::new(&m_op, tol).is_ok();
        // Energy-form bounds via the eigenvalue range.
        let ev = hermitian_eig(&m_op, tol).unwrap().eigenvalues;
        let c3 = ev[0] > tol * ev[ev.len() - 1].max(0.0) && ev[0] > 0.0;
        let sqrt_w: Vec<f64> = w.iter().map(|&v| libm::sqrt(v)).collect();
        let c4 = frame
            .apply_weights(&WeightSeq::from_moduli(&sqrt_w).unwrap())
            .unwrap()
            .optimal_bounds(tol)
            .unwrap()
            .is_frame(tol);
        let ev2 = hermitian_eig(&m_op2, tol).unwrap().eigenvalues;
        let c5 = ev2[0] > tol * ev2[ev2.len() - 1].max(0.0) && ev2[0] > 0.0;
        let c6 = frame
            .apply_weights(&WeightSeq::from_moduli(&w).unwrap())
            .unwrap()
            .optimal_bounds(tol)
            .unwrap()
            .is_frame(tol);

        let statuses = [c1, c2, c3, c4, c5, c6];
        prop_assert!(
            statuses.iter().all(|&s| s == c1),
            "disagreement: {statuses:?} (killed row: {kill})"
        );
        prop_assert_eq!(c1, !kill);
    }

    #[test]
    fn gabor_operator_commutes_with_lattice_shifts(
        lattice_idx in 0usize..6,
        kind_idx in 0usize..6,
    ) {
        let (d, a, b) = [(8, 2, 2), (12, 3, 4), (12, 4, 3), (16, 4, 2), (24, 4, 6), (18, 3, 3)][lattice_idx];
        let kind = WindowKind::ALL[kind_idx];
        let lat = GaborLattice::new(d, a, b).unwrap();
        let spec = WindowSpec::new(kind, d);
        let g = make_window(&spec).unwrap();
        let op = gabor_frame(&g, &lat).unwrap().frame_operator();
        let scale = op.fro_norm().max(1.0);

        let t = CMatrix::from_fn(d, d, |i, j| {
            if (i as i64 - j as i64).rem_euclid(d as i64) == a as i64 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let phases: Vec<C64> = (0..d)
            .map(|n| {
                let ph = 2.0 * std::f64::consts::PI * (b * n) as f64 / d as f64;
                C64::new(ph.cos(), ph.sin())
            })
            .collect();
        let md = CMatrix::diagonal(&phases);

        prop_assert!(op.mul(&t).sub(&t.mul(&op)).fro_norm() <= 1e-11 * scale);
        prop_assert!(op.mul(&md).sub(&md.mul(&op)).fro_norm() <= 1e-11 * scale);
    }
}
