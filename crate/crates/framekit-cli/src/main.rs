use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use framekit_cli::{commands, CliError};

/// Frame-theory toolkit: analysis, weighting experiments, controlled
/// preconditioning and discrete Gabor studies.
#[derive(Parser)]
#[command(name = "framekit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report dimensions, optimal bounds, condition number and frame
    /// status of a frame file.
    Analyze {
        /// Frame JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Also compute the canonical dual and its duality residual
        /// (fails with exit 3 when the input is not a frame).
        #[arg(long)]
        dual: bool,
        /// Output format: text (key=value lines) or json.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Compute tightening weights for a frame and compare condition
    /// numbers before and after.
    Weights {
        /// Frame JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Weight scheme: p2, p4, p6, pinf or mult.
        #[arg(long, default_value = "p2")]
        method: String,
        /// Destination for the weights JSON.
        #[arg(long)]
        output: PathBuf,
    },
    /// Randomized tightening experiment over seeded random frames.
    RandomExperiment {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        trials: usize,
        /// Base seed; trial t uses seed XOR t.
        #[arg(long)]
        seed: u64,
        /// Comma-separated scheme list.
        #[arg(long, default_value = "p2,pinf,mult")]
        method: String,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Discrete Gabor studies.
    Gabor {
        #[command(subcommand)]
        action: GaborAction,
    },
    /// Compare plain and controlled frame-algorithm convergence on a
    /// seeded target vector.
    Precondition {
        /// Frame JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Controller choice: identity, inverse or diag-weights.
        #[arg(long, default_value = "identity")]
        controller: String,
        /// Weight scheme backing the diag-weights controller.
        #[arg(long, default_value = "p2")]
        method: String,
        #[arg(long, default_value_t = 20)]
        iters: usize,
        /// Seed for the reconstruction target.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GaborAction {
    /// Frame-bound ratios over a window/lattice grid.
    Bounds {
        #[arg(long, default_value_t = 144)]
        dim: usize,
        /// Time step; omit both --a and --b for the default grid.
        #[arg(long)]
        a: Option<usize>,
        /// Frequency step.
        #[arg(long)]
        b: Option<usize>,
        /// Comma-separated window list.
        #[arg(long, default_value = "gauss,hann,bartlett")]
        window: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Relative gap between the two weighted-dual constructions.
    DualError {
        #[arg(long, default_value_t = 144)]
        dim: usize,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, default_value = "gauss")]
        window: String,
        /// Mask half-width p (block side 2p+1).
        #[arg(long = "mask-p", default_value_t = 1)]
        mask_p: usize,
        /// Mask amplitude.
        #[arg(long, default_value_t = 2.0)]
        amp: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dual-gap growth against mask size, with per-lattice line fits.
    Sweep {
        #[arg(long, default_value_t = 144)]
        dim: usize,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, default_value = "gauss")]
        window: String,
        /// Comma-separated mask half-widths.
        #[arg(long = "mask-p", default_value = "1,2,3,4")]
        mask_p: String,
        #[arg(long, default_value_t = 2.0)]
        amp: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Analyze {
            input,
            dual,
            format,
        } => {
            let json = match format.as_str() {
                "text" => false,
                "json" => true,
                other => {
                    return Err(CliError::usage(format!(
                        "unknown format {other} (expected text or json)"
                    )))
                }
            };
            commands::analyze(&input, dual, json)
        }
        Command::Weights {
            input,
            method,
            output,
        } => commands::weights(&input, &method, &output),
        Command::RandomExperiment {
            dim,
            count,
            trials,
            seed,
            method,
            output,
        } => commands::random_experiment(dim, count, trials, seed, &method, output.as_deref()),
        Command::Gabor { action } => match action {
            GaborAction::Bounds {
                dim,
                a,
                b,
                window,
                output,
            } => commands::gabor_bounds(dim, a, b, &window, output.as_deref()),
            GaborAction::DualError {
                dim,
                a,
                b,
                window,
                mask_p,
                amp,
                output,
            } => commands::gabor_dual_error(dim, a, b, &window, mask_p, amp, output.as_deref()),
            GaborAction::Sweep {
                dim,
                a,
                b,
                window,
                mask_p,
                amp,
                output,
            } => commands::gabor_sweep(dim, a, b, &window, &mask_p, amp, output.as_deref()),
        },
        Command::Precondition {
            input,
            controller,
            method,
            iters,
            seed,
            output,
        } => commands::precondition(&input, &controller, &method, iters, seed, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code)
        }
    }
}
