use std::time::Instant;

use serde::Serialize;
use sisr_core::coalition::payoff_csv_string;
use sisr_core::lab::{
    equal_sparse_gamma, gen_gaussian_design, gen_max_payoffs, gen_sparse_payoffs,
    gen_transform_payoffs, pseudo_r2_payoffs, r2_payoffs, RegressionDesign, Task, Transform,
    TransformKind,
};
use sisr_core::Result;

use crate::output::{to_json_bytes, write_atomic, RunManifest};
use crate::GenArgs;

#[derive(Serialize)]
struct TransformInfo {
    name: &'static str,
    c1: f64,
    c2: f64,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum TruthBody<'a> {
    TransformGame {
        p: usize,
        seed: u64,
        transform: TransformInfo,
        c0: f64,
        gamma_star: &'a [f64],
        /// 1-based indices of the nonzero true scores.
        support: Vec<usize>,
    },
    SparseGame {
        p: usize,
        seed: u64,
        transform: TransformInfo,
        sigma0: f64,
        gamma_star: &'a [f64],
        support: Vec<usize>,
        clamp_events: usize,
    },
    MaxGame {
        p: usize,
        beta_star: &'a [f64],
    },
    Regression {
        task: &'static str,
        p: usize,
        n: usize,
        seed: u64,
        theta: f64,
        alpha_star: &'a [f64],
        flagged_subsets: usize,
    },
}

#[derive(Serialize)]
struct TruthDocument<'a> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    truth: &'a TruthBody<'a>,
}

pub fn run(args: &GenArgs) -> Result<()> {
    let started = Instant::now();
    let mut manifest = RunManifest::new("gen", Some(args.seed));
    manifest.option("scheme", &args.scheme).option("p", args.p);

    let (csv, truth) = match args.scheme.as_str() {
        "sparse" => {
            let kind = TransformKind::parse(&args.transform)?;
            let gamma_star = equal_sparse_gamma(args.p, args.s_star)?;
            let transform = Transform::standard(kind);
            let (table, truth) =
                gen_sparse_payoffs(args.p, &gamma_star, &transform, args.sigma0, args.seed)?;
            manifest
                .option("sigma0", format!("{:e}", args.sigma0))
                .option("s_star", args.s_star)
                .option("transform", kind.name());
            let body = TruthBody::SparseGame {
                p: args.p,
                seed: args.seed,
                transform: transform_info(&truth.transform),
                sigma0: args.sigma0,
                gamma_star: &truth.gamma_star,
                support: truth.support.iter().map(|j| j + 1).collect(),
                clamp_events: truth.clamp_events,
            };
            (
                payoff_csv_string(&table),
                to_json_with_manifest(&mut manifest, started, &body)?,
            )
        }
        "max" => {
            let worths: Vec<f64> = match &args.beta_star {
                Some(list) => list.clone(),
                None => (1..=args.p).map(|j| j as f64).collect(),
            };
            let table = gen_max_payoffs(args.p, &worths)?;
            manifest.option(
                "beta_star",
                worths
                    .iter()
                    .map(|v| format!("{v:e}"))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            let body = TruthBody::MaxGame {
                p: args.p,
                beta_star: &worths,
            };
            (
                payoff_csv_string(&table),
                to_json_with_manifest(&mut manifest, started, &body)?,
            )
        }
        "r2" | "pseudo-r2" => {
            let n = args.n.unwrap_or(5 * args.p);
            let alpha_star = vec![args.alpha; args.p];
            let task = if args.scheme == "r2" {
                Task::Continuous
            } else {
                Task::Binary
            };
            let design =
                gen_gaussian_design(n, args.p, args.theta, &alpha_star, task, args.seed)?;
            let fits = match task {
                Task::Continuous => r2_payoffs(&design)?,
                Task::Binary => pseudo_r2_payoffs(&design)?,
            };
            manifest
                .option("theta", args.theta)
                .option("n", n)
                .option("alpha", args.alpha);
            write_atomic(&args.design_out, design_csv(&design).as_bytes())?;
            let body = TruthBody::Regression {
                task: match task {
                    Task::Continuous => "continuous",
                    Task::Binary => "binary",
                },
                p: args.p,
                n,
                seed: args.seed,
                theta: args.theta,
                alpha_star: &alpha_star,
                flagged_subsets: fits.flagged.len(),
            };
            (
                payoff_csv_string(&fits.table),
                to_json_with_manifest(&mut manifest, started, &body)?,
            )
        }
        name => {
            let kind = TransformKind::parse(name)?;
            let (table, truth) = gen_transform_payoffs(args.p, kind, args.seed)?;
            let body = TruthBody::TransformGame {
                p: args.p,
                seed: args.seed,
                transform: transform_info(&truth.transform),
                c0: truth.c0.unwrap_or(0.0),
                gamma_star: &truth.gamma_star,
                support: truth.support.iter().map(|j| j + 1).collect(),
            };
            (
                payoff_csv_string(&table),
                to_json_with_manifest(&mut manifest, started, &body)?,
            )
        }
    };

    write_atomic(&args.out, csv.as_bytes())?;
    write_atomic(&args.truth_out, &truth)?;
    println!(
        "scheme={} p={} coalitions={} payoffs={} truth={}",
        args.scheme,
        args.p,
        1u64 << args.p,
        args.out.display(),
        args.truth_out.display()
    );
    Ok(())
}

fn transform_info(transform: &Transform) -> TransformInfo {
    TransformInfo {
        name: transform.kind.name(),
        c1: transform.c1,
        c2: transform.c2,
    }
}

fn to_json_with_manifest(
    manifest: &mut RunManifest,
    started: Instant,
    body: &TruthBody,
) -> Result<Vec<u8>> {
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    to_json_bytes(&TruthDocument {
        manifest,
        truth: body,
    })
}

fn design_csv(design: &RegressionDesign) -> String {
    let mut csv = String::new();
    for j in 1..=design.p {
        csv.push_str(&format!("x{j},"));
    }
    csv.push_str("y\n");
    for row in 0..design.n {
        for j in 0..design.p {
            csv.push_str(&format!("{:.16e},", design.x[row * design.p + j]));
        }
        csv.push_str(&format!("{:.16e}\n", design.y[row]));
    }
    csv
}
