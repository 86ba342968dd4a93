mod gen;
mod isotonic;
mod output;
mod reproduce;
mod shapley;
mod solve;

use std::path::PathBuf;
use std::process;

use clap::{ArgGroup, Args, Parser, Subcommand};
use sisr_core::SisrError;

#[derive(Parser)]
#[command(
    name = "sisr",
    version,
    about = "Shapley attribution and sparse isotonic calibration for coalition payoff tables"
)]
struct Cli {
    /// Cap the worker thread pool (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the sparse monotone attribution model to a payoff table.
    Solve(SolveArgs),
    /// Exact Shapley attribution of a payoff table.
    Shapley(ShapleyArgs),
    /// Generate a synthetic payoff table with recorded ground truth.
    Gen(GenArgs),
    /// Weighted isotonic regression over the rows of a value,weight file.
    Isotonic(IsotonicArgs),
    /// Re-run a bundled experiment grid and emit a plot-ready table.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("budget").required(true).multiple(false)))]
pub struct SolveArgs {
    /// Payoff CSV with mask,value rows covering every coalition.
    #[arg(long)]
    payoffs: PathBuf,
    /// Number of nonzero scores to allow.
    #[arg(long, group = "budget")]
    sparsity: Option<usize>,
    /// Sweep sparsity levels `min:max` and pick one by the risk inflation
    /// criterion.
    #[arg(long, value_parser = parse_range, group = "budget")]
    ric: Option<(usize, usize)>,
    /// Solution JSON destination.
    #[arg(long, default_value = "solution.json")]
    out: PathBuf,
    /// Fitted transform TSV destination (payoff, fitted value per row).
    #[arg(long, default_value = "transform.tsv")]
    transform_out: PathBuf,
    /// Stop the outer loop when the relative objective drop falls below this.
    #[arg(long, default_value_t = 1e-9)]
    outer_tol: f64,
    #[arg(long, default_value_t = 500)]
    max_outer: usize,
    /// Stop the score loop when the iterate displacement falls below this.
    #[arg(long, default_value_t = 1e-10)]
    inner_tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_inner: usize,
    /// Weight multiplier standing in for the infinite weight of the empty
    /// and grand coalitions.
    #[arg(long, default_value_t = 10.0)]
    multiplier: f64,
}

#[derive(Args)]
pub struct ShapleyArgs {
    /// Payoff CSV with mask,value rows covering every coalition.
    #[arg(long)]
    payoffs: PathBuf,
    /// Attribution CSV destination (feature,beta rows).
    #[arg(long, default_value = "shapley.csv")]
    out: PathBuf,
    /// Also solve the weighted least squares route and report the largest
    /// disagreement with the exact enumeration.
    #[arg(long)]
    check_wls: bool,
}

#[derive(Args)]
pub struct GenArgs {
    /// One of: fifth-root, square-root, exponential, logarithmic, tangent,
    /// normal-cdf, sparse, max, r2, pseudo-r2.
    #[arg(long)]
    scheme: String,
    /// Feature count.
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Payoff CSV destination.
    #[arg(long, default_value = "payoffs.csv")]
    out: PathBuf,
    /// Ground-truth JSON destination.
    #[arg(long, default_value = "truth.json")]
    truth_out: PathBuf,
    /// Regression design CSV destination (r2 and pseudo-r2 schemes).
    #[arg(long, default_value = "design.csv")]
    design_out: PathBuf,
    /// Noise scale of the sparse game.
    #[arg(long, default_value_t = 1e-3)]
    sigma0: f64,
    /// True support size of the sparse game.
    #[arg(long, default_value_t = 3)]
    s_star: usize,
    /// Transform of the sparse game.
    #[arg(long, default_value = "cube-root")]
    transform: String,
    /// Per-player worths of the max game, comma separated (default 1..p).
    #[arg(long, value_delimiter = ',')]
    beta_star: Option<Vec<f64>>,
    /// Toeplitz correlation of the regression design.
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
    /// Regression sample size (default 5p).
    #[arg(long)]
    n: Option<usize>,
    /// Common value of the true regression coefficients.
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
}

#[derive(Args)]
pub struct IsotonicArgs {
    /// CSV with value,weight rows; the fit is non-decreasing in row order.
    #[arg(long)]
    data: PathBuf,
    /// Output CSV destination (value,weight,fitted rows).
    #[arg(long, default_value = "isotonic.csv")]
    out: PathBuf,
}

#[derive(Args)]
pub struct ReproduceArgs {
    /// One of: transforms, noise-sweep, timing, r2-grid.
    experiment: String,
    /// Results TSV destination (default `<experiment>.tsv`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed; runs within a grid offset from it deterministically.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repetitions per grid cell where the experiment averages over runs.
    #[arg(long, default_value_t = 20)]
    runs: usize,
    /// Feature counts to cover, comma separated (default per experiment).
    #[arg(long, value_delimiter = ',')]
    p_list: Option<Vec<usize>>,
    /// Restrict the transforms experiment to one scheme.
    #[arg(long)]
    scheme: Option<String>,
    /// Restrict the noise-sweep experiment to one noise scale.
    #[arg(long)]
    sigma0: Option<f64>,
    /// Fitted-transform curves TSV for the transforms experiment.
    #[arg(long)]
    curves_out: Option<PathBuf>,
}

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected `min:max`, got `{text}`"))?;
    let lo = lo
        .parse::<usize>()
        .map_err(|e| format!("bad lower bound `{lo}`: {e}"))?;
    let hi = hi
        .parse::<usize>()
        .map_err(|e| format!("bad upper bound `{hi}`: {e}"))?;
    Ok((lo, hi))
}


fn exit_code(err: &SisrError) -> i32 {
    match err {
        SisrError::Capacity { .. }
        | SisrError::Structural(_)
        | SisrError::Data(_)
        | SisrError::Io(_) => 1,
        SisrError::Domain(_) | SisrError::Config(_) => 2,
        SisrError::Numerical(_) | SisrError::FlatPayoff => 3,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Ignore a second initialization (tests may reuse the process).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let outcome = match cli.command {
        Command::Solve(args) => solve::run(&args),
        Command::Shapley(args) => shapley::run(&args),
        Command::Gen(args) => gen::run(&args),
        Command::Isotonic(args) => isotonic::run(&args),
        Command::Reproduce(args) => reproduce::run(&args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err}");
        process::exit(exit_code(&err));
    }
}
