use std::path::PathBuf;

use sisr_core::engine::{linearity_gap, solve, SolveOptions};
use sisr_core::lab::{
    affinity, equal_sparse_gamma, gen_gaussian_design, gen_sparse_payoffs, gen_transform_payoffs,
    pearson, pseudo_r2_payoffs, r2_payoffs, support_recovery, timing_sweep, Task, Transform,
    TransformKind,
};
use sisr_core::{Result, SisrError};

use crate::output::write_atomic;
use crate::ReproduceArgs;

pub fn run(args: &ReproduceArgs) -> Result<()> {
    match args.experiment.as_str() {
        "transforms" => transforms(args),
        "noise-sweep" => noise_sweep(args),
        "timing" => timing(args),
        "r2-grid" => r2_grid(args),
        other => Err(SisrError::Config(format!(
            "unknown experiment {other:?}; expected one of transforms, noise-sweep, timing, r2-grid"
        ))),
    }
}

fn out_path(args: &ReproduceArgs) -> PathBuf {
    args.out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.tsv", args.experiment)))
}

fn first_p(args: &ReproduceArgs, default: usize) -> usize {
    args.p_list
        .as_ref()
        .and_then(|list| list.first().copied())
        .unwrap_or(default)
}

/// Fit each transform game at full sparsity and report how well the fitted
/// curve correlates with the hidden transform evaluated on the payoffs.
fn transforms(args: &ReproduceArgs) -> Result<()> {
    let p = first_p(args, 10);
    let kinds: Vec<TransformKind> = match &args.scheme {
        Some(name) => vec![TransformKind::parse(name)?],
        None => TransformKind::generator_schemes().to_vec(),
    };
    let mut tsv = String::from("scheme\tp\tseed\tcorrelation\n");
    let mut curves = String::from("scheme\tnu\tt_hat\tt_star\n");
    for (index, kind) in kinds.iter().enumerate() {
        let seed = args.seed + index as u64;
        let (table, truth) = gen_transform_payoffs(p, *kind, seed)?;
        let solution = solve(&table, &SolveOptions::new(p))?;
        let t_star: Vec<f64> = table
            .values()
            .iter()
            .map(|&nu| truth.transform.forward(nu))
            .collect();
        let r = pearson(&solution.t_hat, &t_star)?;
        tsv.push_str(&format!("{}\t{p}\t{seed}\t{r:.16e}\n", kind.name()));
        if args.curves_out.is_some() {
            for i in 0..table.len() {
                curves.push_str(&format!(
                    "{}\t{:.16e}\t{:.16e}\t{:.16e}\n",
                    kind.name(),
                    table.values()[i],
                    solution.t_hat[i],
                    t_star[i]
                ));
            }
        }
        println!("{}: r = {r:.4}", kind.name());
    }
    write_atomic(&out_path(args), tsv.as_bytes())?;
    if let Some(path) = &args.curves_out {
        write_atomic(path, curves.as_bytes())?;
    }
    Ok(())
}

/// Sweep noise levels on the sparse additive game and report mean affinity
/// and support recovery over repeated draws.
fn noise_sweep(args: &ReproduceArgs) -> Result<()> {
    if args.runs == 0 {
        return Err(SisrError::Config("need at least one run".into()));
    }
    let p_values = args.p_list.clone().unwrap_or_else(|| vec![10]);
    let sigma_values = match args.sigma0 {
        Some(value) => vec![value],
        None => vec![1e-3, 5e-3, 1e-2, 5e-2, 1e-1, 2e-1],
    };
    let s_star = 3;
    // ceil(1.5 * s_star)
    let budget = 5;
    let transform = Transform::standard(TransformKind::CubeRoot);
    let mut tsv = String::from("p\tsigma0\truns\tmean_affinity\tmean_support\n");
    for &p in &p_values {
        let gamma_star = equal_sparse_gamma(p, s_star)?;
        for &sigma0 in &sigma_values {
            let mut affn_sum = 0.0;
            let mut supp_sum = 0.0;
            for run in 0..args.runs {
                let seed = args.seed + run as u64;
                let (table, truth) =
                    gen_sparse_payoffs(p, &gamma_star, &transform, sigma0, seed)?;
                let solution = solve(&table, &SolveOptions::new(budget))?;
                affn_sum += affinity(&solution.gamma, &gamma_star)?;
                supp_sum += support_recovery(&solution.gamma, &truth.support)?;
            }
            let runs = args.runs as f64;
            tsv.push_str(&format!(
                "{p}\t{sigma0:e}\t{}\t{:.16e}\t{:.16e}\n",
                args.runs,
                affn_sum / runs,
                supp_sum / runs
            ));
            println!(
                "p={p} sigma0={sigma0:e}: affinity {:.2}, support {:.2}",
                affn_sum / runs,
                supp_sum / runs
            );
        }
    }
    write_atomic(&out_path(args), tsv.as_bytes())
}

/// Time the solver across sparsity budgets on one sparse-game table.
fn timing(args: &ReproduceArgs) -> Result<()> {
    let p = first_p(args, 15);
    let sigma0 = args.sigma0.unwrap_or(5e-3);
    let gamma_star = equal_sparse_gamma(p, 3)?;
    let transform = Transform::standard(TransformKind::CubeRoot);
    let (table, _) = gen_sparse_payoffs(p, &gamma_star, &transform, sigma0, args.seed)?;
    let s_values: Vec<usize> = (1..=p).collect();
    let rows = timing_sweep(&table, &s_values, &SolveOptions::new(1))?;
    let mut tsv = String::from("s\tmedian_seconds\n");
    for row in &rows {
        tsv.push_str(&format!("{}\t{:.16e}\n", row.sparsity, row.median_seconds));
        println!("s={}: {:.3} s", row.sparsity, row.median_seconds);
    }
    write_atomic(&out_path(args), tsv.as_bytes())
}

/// Compare the monotone fit against the best affine fit on regression-driven
/// payoff tables for both task kinds.
fn r2_grid(args: &ReproduceArgs) -> Result<()> {
    let p_values = args.p_list.clone().unwrap_or_else(|| vec![8]);
    let theta = 0.5;
    let alpha = 3.0;
    let mut tsv =
        String::from("task\tp\tn\ttheta\tseed\trss_monotone\trss_linear\tratio\n");
    for &p in &p_values {
        let n = 5 * p;
        let alpha_star = vec![alpha; p];
        for (task, name) in [(Task::Continuous, "continuous"), (Task::Binary, "binary")] {
            let design = gen_gaussian_design(n, p, theta, &alpha_star, task, args.seed)?;
            let fits = match task {
                Task::Continuous => r2_payoffs(&design)?,
                Task::Binary => pseudo_r2_payoffs(&design)?,
            };
            let solution = solve(&fits.table, &SolveOptions::new(p))?;
            let gap = linearity_gap(&fits.table, &solution)?;
            tsv.push_str(&format!(
                "{name}\t{p}\t{n}\t{theta}\t{}\t{:.16e}\t{:.16e}\t{:.16e}\n",
                args.seed, gap.residual_monotone, gap.residual_linear, gap.ratio
            ));
            println!("{name} p={p}: ratio {:.2}", gap.ratio);
        }
    }
    write_atomic(&out_path(args), tsv.as_bytes())
}
