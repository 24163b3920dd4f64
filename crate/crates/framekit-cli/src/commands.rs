//! Command implementations. Each returns the text destined for stdout;
//! file outputs are written in place. Every CSV ends with a metadata
//! comment naming the tool version, the full configuration, and the
//! seed (`-` when the command uses none), so outputs are self-describing
//! and reruns are byte-comparable.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use framekit::controlled::{
    diagonal_controller, frame_algorithm, precondition_report, Controller,
};
use framekit::frames::check_dual_pair;
use framekit::gabor::{
    block_size_sweep, bound_ratio_table, dual_error, GaborLattice, MaskSpec, WindowKind,
    WindowSpec,
};
use framekit::weighting::{compute_weights, tightening_experiment, WeightMethod};
use framekit::{C64, DEFAULT_TOL, Error};

use crate::io;
use crate::{CliError, TOOL_TAG};

/// Lattice grid of the reference experiment at length 144.
pub const DEFAULT_LATTICES: [(usize, usize); 6] =
    [(12, 9), (9, 8), (8, 6), (6, 6), (6, 4), (4, 4)];

fn write_out(path: Option<&Path>, content: &str) -> Result<String, CliError> {
    match path {
        Some(p) => {
            fs::write(p, content)
                .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(content.to_string()),
    }
}

fn metadata_line(config: &str, seed: Option<u64>) -> String {
    let seed = match seed {
        Some(s) => s.to_string(),
        None => "-".to_string(),
    };
    format!("# {TOOL_TAG} | {config} | seed={seed}\n")
}

fn parse_methods(spec: &str) -> Result<Vec<WeightMethod>, CliError> {
    spec.split(',')
        .map(|s| s.trim().parse::<WeightMethod>().map_err(CliError::usage_from_math))
        .collect()
}

fn parse_windows(spec: &str) -> Result<Vec<WindowKind>, CliError> {
    spec.split(',')
        .map(|s| s.trim().parse::<WindowKind>().map_err(CliError::usage_from_math))
        .collect()
}

fn lattices_for(
    dim: usize,
    a: Option<usize>,
    b: Option<usize>,
) -> Result<Vec<GaborLattice>, CliError> {
    match (a, b) {
        (Some(a), Some(b)) => Ok(vec![
            GaborLattice::new(dim, a, b).map_err(CliError::usage_from_math)?
        ]),
        (None, None) => DEFAULT_LATTICES
            .iter()
            .map(|&(a, b)| GaborLattice::new(dim, a, b).map_err(CliError::usage_from_math))
            .collect(),
        _ => Err(CliError::usage(
            "provide both --a and --b, or neither for the default grid",
        )),
    }
}

/// FIR windows default to a quarter-length support, the convention of
/// the reference tables; the periodized Gaussian spans the full length.
fn window_spec(kind: WindowKind, dim: usize) -> WindowSpec {
    let spec = WindowSpec::new(kind, dim);
    if kind == WindowKind::Gauss {
        spec
    } else {
        spec.with_support((dim / 4).max(1))
    }
}

pub fn analyze(input: &Path, dual: bool, json: bool) -> Result<String, CliError> {
    let frame = io::load_frame(input)?;
    let bounds = frame.optimal_bounds(DEFAULT_TOL)?;
    let is_frame = bounds.is_frame(DEFAULT_TOL);
    let condition = if is_frame {
        Some(bounds.upper / bounds.lower)
    } else {
        None
    };
    let dual_info = if dual {
        let d = frame.canonical_dual(DEFAULT_TOL).map_err(CliError::math)?;
        let pair = check_dual_pair(&frame, &d, DEFAULT_TOL)?;
        let db = d.optimal_bounds(DEFAULT_TOL)?;
        Some((pair.residual, db.lower, db.upper))
    } else {
        None
    };

    if json {
        let value = serde_json::json!({
            "dim": frame.dim(),
            "count": frame.count(),
            "lower": bounds.lower,
            "upper": bounds.upper,
            "condition": condition,
            "frame": is_frame,
            "dual_residual": dual_info.map(|(r, _, _)| r),
            "dual_lower": dual_info.map(|(_, l, _)| l),
            "dual_upper": dual_info.map(|(_, _, u)| u),
        });
        return Ok(format!("{value}\n"));
    }
    let mut out = String::new();
    let _ = writeln!(out, "dim={}", frame.dim());
    let _ = writeln!(out, "count={}", frame.count());
    let _ = writeln!(out, "lower={}", bounds.lower);
    let _ = writeln!(out, "upper={}", bounds.upper);
    if let Some(k) = condition {
        let _ = writeln!(out, "condition={k}");
    }
    let _ = writeln!(out, "frame={is_frame}");
    if let Some((residual, lower, upper)) = dual_info {
        let _ = writeln!(out, "dual_residual={residual}");
        let _ = writeln!(out, "dual_lower={lower}");
        let _ = writeln!(out, "dual_upper={upper}");
    }
    Ok(out)
}

pub fn weights(input: &Path, method: &str, output: &Path) -> Result<String, CliError> {
    let method: WeightMethod = method.parse().map_err(CliError::usage_from_math)?;
    let frame = io::load_frame(input)?;
    let before = frame.condition_number(DEFAULT_TOL).map_err(CliError::math)?;
    let w = compute_weights(&frame, method, DEFAULT_TOL).map_err(CliError::math)?;
    let after = frame
        .apply_weights(&w)?
        .condition_number(DEFAULT_TOL)
        .map_err(CliError::math)?;
    fs::write(output, io::weights_to_json(&w) + "\n")
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", output.display())))?;
    Ok(format!("kappa_before={before}\nkappa_after={after}\n"))
}

pub fn random_experiment(
    dim: usize,
    count: usize,
    trials: usize,
    seed: u64,
    methods: &str,
    output: Option<&Path>,
) -> Result<String, CliError> {
    if dim == 0 || count <= dim {
        return Err(CliError::usage("need --count greater than --dim"));
    }
    if trials == 0 {
        return Err(CliError::usage("need at least one trial"));
    }
    let methods = parse_methods(methods)?;
    let report = tightening_experiment(dim, count, trials, &methods, seed, DEFAULT_TOL)
        .map_err(|e| match e {
            Error::InvalidParameter { .. } => CliError::usage_from_math(e),
            other => CliError::math(other),
        })?;
    let mut csv = String::from("method,improved,best,trials,dim,count,seed\n");
    for stat in &report.stats {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            stat.method, stat.improved, stat.best, trials, dim, count, seed
        );
    }
    let _ = writeln!(
        csv,
        "__overall__,{},,{},{},{},{}",
        report.overall_improved, trials, dim, count, seed
    );
    let method_names: Vec<&str> = methods.iter().map(|m| m.name()).collect();
    csv.push_str(&metadata_line(
        &format!(
            "random-experiment dim={dim} count={count} trials={trials} methods={}",
            method_names.join(",")
        ),
        Some(seed),
    ));
    write_out(output, &csv)
}

pub fn gabor_bounds(
    dim: usize,
    a: Option<usize>,
    b: Option<usize>,
    windows: &str,
    output: Option<&Path>,
) -> Result<String, CliError> {
    let kinds = parse_windows(windows)?;
    let lats = lattices_for(dim, a, b)?;
    let specs: Vec<WindowSpec> = kinds.iter().map(|&k| window_spec(k, dim)).collect();
    let table = bound_ratio_table(&specs, &lats, DEFAULT_TOL).map_err(CliError::math)?;
    let mut csv = String::from("a,b,window,ratio\n");
    for (i, lat) in table.lattices.iter().enumerate() {
        for (j, kind) in kinds.iter().enumerate() {
            let ratio = match table.ratios[i][j] {
                Some(r) => r.to_string(),
                None => String::new(),
            };
            let _ = writeln!(
                csv,
                "{},{},{},{}",
                lat.time_step(),
                lat.freq_step(),
                kind,
                ratio
            );
        }
    }
    let kind_names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
    csv.push_str(&metadata_line(
        &format!(
            "gabor bounds dim={dim} lattices={} windows={}",
            lattice_summary(a, b),
            kind_names.join(",")
        ),
        None,
    ));
    write_out(output, &csv)
}

fn lattice_summary(a: Option<usize>, b: Option<usize>) -> String {
    match (a, b) {
        (Some(a), Some(b)) => format!("{a}x{b}"),
        _ => "default".to_string(),
    }
}

pub fn gabor_dual_error(
    dim: usize,
    a: Option<usize>,
    b: Option<usize>,
    window: &str,
    mask_p: usize,
    amp: f64,
    output: Option<&Path>,
) -> Result<String, CliError> {
    let kind: WindowKind = window.parse().map_err(CliError::usage_from_math)?;
    let lats = lattices_for(dim, a, b)?;
    let spec = window_spec(kind, dim);
    let mask = MaskSpec::new(mask_p, amp).map_err(CliError::usage_from_math)?;
    let mut csv = String::from("a,b,window,p,epsilon\n");
    for lat in &lats {
        let report = dual_error(&spec, lat, &mask, DEFAULT_TOL).map_err(|e| match e {
            Error::MaskTooLarge { .. } => CliError::usage_from_math(e),
            other => CliError::math(other),
        })?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            lat.time_step(),
            lat.freq_step(),
            kind,
            mask_p,
            report.epsilon
        );
    }
    csv.push_str(&metadata_line(
        &format!(
            "gabor dual-error dim={dim} lattices={} window={kind} mask-p={mask_p} amp={amp}",
            lattice_summary(a, b)
        ),
        None,
    ));
    write_out(output, &csv)
}

pub fn gabor_sweep(
    dim: usize,
    a: Option<usize>,
    b: Option<usize>,
    window: &str,
    mask_ps: &str,
    amp: f64,
    output: Option<&Path>,
) -> Result<String, CliError> {
    let kind: WindowKind = window.parse().map_err(CliError::usage_from_math)?;
    let lats = lattices_for(dim, a, b)?;
    let spec = window_spec(kind, dim);
    let ps: Vec<usize> = mask_ps
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("bad mask half-width: {s}")))
        })
        .collect::<Result<_, _>>()?;
    if !(amp > 0.0 && amp.is_finite()) {
        return Err(CliError::usage("mask amplitude must be positive"));
    }
    let report = block_size_sweep(&spec, &lats, &ps, amp, DEFAULT_TOL).map_err(|e| match e {
        Error::InvalidParameter { .. } => CliError::usage_from_math(e),
        other => CliError::math(other),
    })?;
    let mut csv = String::from("a,b,window,p,epsilon\n");
    for cell in &report.cells {
        let eps = match cell.epsilon {
            Some(e) => e.to_string(),
            None => String::new(),
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            cell.lattice.time_step(),
            cell.lattice.freq_step(),
            kind,
            cell.half_width,
            eps
        );
    }
    for (lat, fit) in &report.fits {
        match fit {
            Some(f) => {
                let _ = writeln!(
                    csv,
                    "# fit a={} b={} slope={} intercept={} r2={}",
                    lat.time_step(),
                    lat.freq_step(),
                    f.slope,
                    f.intercept,
                    f.r_squared
                );
            }
            None => {
                let _ = writeln!(
                    csv,
                    "# fit a={} b={} degenerate",
                    lat.time_step(),
                    lat.freq_step()
                );
            }
        }
    }
    let p_names: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
    csv.push_str(&metadata_line(
        &format!(
            "gabor sweep dim={dim} lattices={} window={kind} mask-p={} amp={amp}",
            lattice_summary(a, b),
            p_names.join(",")
        ),
        None,
    ));
    write_out(output, &csv)
}

fn seeded_target(dim: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = move || ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
    (0..dim).map(|_| C64::new(unit(), unit())).collect()
}

pub fn precondition(
    input: &Path,
    controller: &str,
    method: &str,
    iters: usize,
    seed: u64,
    output: Option<&Path>,
) -> Result<String, CliError> {
    if iters == 0 {
        return Err(CliError::usage("need at least one iteration"));
    }
    let frame = io::load_frame(input)?;
    let ctrl = match controller {
        "identity" => Controller::identity(frame.dim()),
        "inverse" => Controller::inverse_frame_operator(&frame, DEFAULT_TOL)
            .map_err(CliError::math)?,
        "diag-weights" => {
            let m: WeightMethod = method.parse().map_err(CliError::usage_from_math)?;
            let w = compute_weights(&frame, m, DEFAULT_TOL).map_err(CliError::math)?;
            diagonal_controller(&frame, &w.energies(), DEFAULT_TOL).map_err(CliError::math)?
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown controller {other} (expected identity, inverse or diag-weights)"
            )))
        }
    };
    let report = precondition_report(&frame, &ctrl, DEFAULT_TOL).map_err(CliError::math)?;
    let target = seeded_target(frame.dim(), seed);
    let (_, plain) = frame_algorithm(&frame, &target, None, iters, DEFAULT_TOL)?;
    let (_, with_ctrl) = frame_algorithm(&frame, &target, Some(&ctrl), iters, DEFAULT_TOL)?;

    let rows = plain
        .residual_history
        .len()
        .max(with_ctrl.residual_history.len());
    let mut csv = String::from("iteration,plain_residual,controlled_residual\n");
    for k in 0..rows {
        let p = plain
            .residual_history
            .get(k)
            .map(|v| v.to_string())
            .unwrap_or_default();
        let c = with_ctrl
            .residual_history
            .get(k)
            .map(|v| v.to_string())
            .unwrap_or_default();
        let _ = writeln!(csv, "{k},{p},{c}");
    }
    csv.push_str(&metadata_line(
        &format!(
            "precondition controller={controller} method={method} iters={iters} \
             kappa_plain={} kappa_controlled={} delta_plain={} delta_controlled={}",
            report.kappa_plain, report.kappa_controlled, report.delta_plain,
            report.delta_controlled
        ),
        Some(seed),
    ));
    write_out(output, &csv)
}
