use std::time::Instant;

use serde::Serialize;
use sisr_core::coalition::read_payoff_csv;
use sisr_core::engine::{ric_select, solve, RicSelection, SisrSolution, SolveOptions};
use sisr_core::Result;

use crate::output::{to_json_bytes, write_atomic, RunManifest};
use crate::SolveArgs;

#[derive(Serialize)]
struct TransformBlock {
    nu: Vec<f64>,
    t: Vec<f64>,
}

#[derive(Serialize)]
struct RicPointBlock {
    sparsity: usize,
    objective: f64,
    score: f64,
}

#[derive(Serialize)]
struct RicBlock {
    selected: usize,
    sigma2: f64,
    curve: Vec<RicPointBlock>,
}

#[derive(Serialize)]
struct SolutionDocument<'a> {
    manifest: &'a RunManifest,
    p: usize,
    sparsity: usize,
    objective: f64,
    outer_iterations: usize,
    inner_iterations: usize,
    converged: bool,
    degenerate: bool,
    gamma: &'a [f64],
    /// 1-based indices of the nonzero scores.
    support: Vec<usize>,
    beta: &'a [f64],
    transform: TransformBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    ric: Option<RicBlock>,
}

pub fn run(args: &SolveArgs) -> Result<()> {
    let started = Instant::now();
    let table = read_payoff_csv(&args.payoffs)?;

    let mut options = SolveOptions::new(args.sparsity.unwrap_or(1));
    options.outer_tol = args.outer_tol;
    options.max_outer = args.max_outer;
    options.inner_tol = args.inner_tol;
    options.max_inner = args.max_inner;
    options.infinite_multiplier = args.multiplier;

    let (solution, ric) = match args.ric {
        Some((lo, hi)) => {
            let selection = ric_select(&table, lo, hi, &options)?;
            let solution = solve(&table, &options.with_sparsity(selection.selected))?;
            (solution, Some(selection))
        }
        None => (solve(&table, &options)?, None),
    };

    let mut manifest = RunManifest::new("solve", None);
    manifest.input(&args.payoffs)?;
    manifest
        .option("sparsity", solution.sparsity)
        .option("outer_tol", format!("{:e}", options.outer_tol))
        .option("max_outer", options.max_outer)
        .option("inner_tol", format!("{:e}", options.inner_tol))
        .option("max_inner", options.max_inner)
        .option("infinite_multiplier", options.infinite_multiplier)
        .option("rho_inflation", format!("{:e}", options.rho_inflation))
        .option("init_scale", format!("{:e}", options.init_scale));
    if let Some((lo, hi)) = args.ric {
        manifest.option("ric_range", format!("{lo}:{hi}"));
    }
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();

    let document = SolutionDocument {
        manifest: &manifest,
        p: solution.p,
        sparsity: solution.sparsity,
        objective: solution.objective,
        outer_iterations: solution.outer_iterations,
        inner_iterations: solution.inner_iterations,
        converged: solution.converged,
        degenerate: solution.degenerate,
        gamma: &solution.gamma,
        support: solution.support().iter().map(|j| j + 1).collect(),
        beta: &solution.beta,
        transform: TransformBlock {
            nu: solution.transform_samples.iter().map(|s| s.0).collect(),
            t: solution.transform_samples.iter().map(|s| s.1).collect(),
        },
        ric: ric.map(ric_block),
    };
    write_atomic(&args.out, &to_json_bytes(&document)?)?;
    write_atomic(&args.transform_out, transform_tsv(&solution).as_bytes())?;

    println!(
        "s={} objective={:.16e} support={} converged={}",
        solution.sparsity,
        solution.objective,
        solution.support().len(),
        solution.converged
    );
    Ok(())
}

fn ric_block(selection: RicSelection) -> RicBlock {
    RicBlock {
        selected: selection.selected,
        sigma2: selection.sigma2,
        curve: selection
            .curve
            .into_iter()
            .map(|point| RicPointBlock {
                sparsity: point.sparsity,
                objective: point.objective,
                score: point.score,
            })
            .collect(),
    }
}

fn transform_tsv(solution: &SisrSolution) -> String {
    let mut text = String::from("nu\tt\n");
    for (nu, t) in &solution.transform_samples {
        text.push_str(&format!("{nu:.16e}\t{t:.16e}\n"));
    }
    text
}
