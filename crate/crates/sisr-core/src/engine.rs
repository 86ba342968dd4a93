//! The alternating solver: hard-thresholded gradient steps for the sparse
//! score vector interleaved with isotonic fits for the monotone transform.
//!
//! Inputs are baseline-adjusted and rescaled to max-abs one before
//! optimization, so attributions do not depend on the payoff unit. The
//! transform target starts at a large multiple of the payoffs; once the
//! first score estimate exists, the isotonic fit collapses the target onto
//! the scale fixed by the unit-norm scores.

use crate::coalition::{baseline_adjust, incidence_matrix, weight_vector, PayoffTable};
use crate::error::{Result, SisrError};
use crate::isotonic::{build_order, isotonic_fit};
use crate::shapley::{exact_shapley, ranking, ShapleyVector};
use crate::sparse::{gamma_solve, l2_norm, support_of, StepContext};

/// Solver configuration with the defaults used throughout.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Maximum number of nonzero score entries.
    pub sparsity: usize,
    /// Relative objective change below which the outer loop stops.
    pub outer_tol: f64,
    pub max_outer: usize,
    /// Iterate displacement below which an inner solve stops.
    pub inner_tol: f64,
    pub max_inner: usize,
    /// Weight multiplier standing in for infinity at the two anchors.
    pub infinite_multiplier: f64,
    /// Relative inflation applied to the spectral norm in the step bound.
    pub rho_inflation: f64,
    /// Initial transform target as a multiple of the rescaled payoffs.
    pub init_scale: f64,
}

impl SolveOptions {
    pub fn new(sparsity: usize) -> Self {
        Self {
            sparsity,
            outer_tol: 1e-9,
            max_outer: 500,
            inner_tol: 1e-10,
            max_inner: 10_000,
            infinite_multiplier: 10.0,
            rho_inflation: 1e-6,
            init_scale: 1e4,
        }
    }

    pub fn with_sparsity(&self, sparsity: usize) -> Self {
        let mut out = self.clone();
        out.sparsity = sparsity;
        out
    }

    fn validate(&self, p: usize) -> Result<()> {
        if self.sparsity == 0 || self.sparsity > p {
            return Err(SisrError::Domain(format!(
                "sparsity must lie in 1..={p}, got {}",
                self.sparsity
            )));
        }
        if !(self.outer_tol > 0.0) || !(self.inner_tol > 0.0) {
            return Err(SisrError::Domain(
                "convergence tolerances must be positive".into(),
            ));
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return Err(SisrError::Domain("iteration caps must be positive".into()));
        }
        if !(self.init_scale > 0.0 && self.init_scale.is_finite()) {
            return Err(SisrError::Domain(format!(
                "init scale must be positive and finite, got {}",
                self.init_scale
            )));
        }
        Ok(())
    }
}

/// A fitted decomposition: unit-norm scores `gamma`, the monotone transform
/// as sampled `(payoff, transformed)` pairs, and scores mapped back to the
/// payoff scale in `beta`.
#[derive(Debug, Clone)]
pub struct SisrSolution {
    pub p: usize,
    pub sparsity: usize,
    /// Unit-norm scores with at most `sparsity` nonzeros (all-zero only if
    /// the solve degenerated, which `degenerate` records).
    pub gamma: Vec<f64>,
    /// `(nu, t)` pairs sorted by baseline-adjusted payoff `nu`; `t` is
    /// non-decreasing along them and constant across equal `nu`.
    pub transform_samples: Vec<(f64, f64)>,
    /// Scores pulled back through the inverse transform; exactly zero
    /// wherever `gamma` is zero.
    pub beta: Vec<f64>,
    /// Final value of the weighted half squared residual, on the internally
    /// rescaled payoffs.
    pub objective: f64,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub converged: bool,
    pub degenerate: bool,
    /// Objective after each outer iteration; non-increasing up to rounding.
    pub objective_trace: Vec<f64>,
    /// Baseline-adjusted payoffs in table entry order.
    pub nu: Vec<f64>,
    /// Fitted transform values in table entry order.
    pub t_hat: Vec<f64>,
}

impl SisrSolution {
    /// 0-based indices of nonzero scores.
    pub fn support(&self) -> Vec<usize> {
        support_of(&self.gamma)
    }

    /// Evaluates the fitted transform at an arbitrary payoff by piecewise
    /// linear interpolation through the sampled `(nu, t)` pairs, extending
    /// the terminal segments beyond the sampled range. Payoffs that appear
    /// in the table return their fitted value exactly.
    pub fn transform_at(&self, x: f64) -> f64 {
        // Distinct payoffs only; ties share one fitted value by construction.
        let mut knots: Vec<(f64, f64)> = Vec::new();
        for &(nu, t) in &self.transform_samples {
            match knots.last() {
                Some(&(prev, _)) if prev == nu => {}
                _ => knots.push((nu, t)),
            }
        }
        if knots.len() == 1 {
            return knots[0].1;
        }
        let last = knots.len() - 1;
        let seg = match knots.binary_search_by(|(nu, _)| nu.partial_cmp(&x).unwrap()) {
            Ok(k) => return knots[k].1,
            Err(0) => 0,
            Err(k) if k > last => last - 1,
            Err(k) => k - 1,
        };
        let (x0, t0) = knots[seg];
        let (x1, t1) = knots[seg + 1];
        t0 + (x - x0) * (t1 - t0) / (x1 - x0)
    }
}

fn relative_drop(prev: f64, next: f64) -> f64 {
    (prev - next).abs() / prev.abs().max(f64::MIN_POSITIVE)
}

/// Fits scores and transform to a payoff table.
pub fn solve(table: &PayoffTable, options: &SolveOptions) -> Result<SisrSolution> {
    let p = table.p();
    if p < 2 {
        return Err(SisrError::Domain(
            "attribution needs at least two features".into(),
        ));
    }
    options.validate(p)?;
    let adjusted = baseline_adjust(table);
    let nu = adjusted.values().to_vec();
    let max_abs = nu.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if max_abs == 0.0 {
        return Err(SisrError::FlatPayoff);
    }
    let scaled: Vec<f64> = nu.iter().map(|v| v / max_abs).collect();

    let plan = build_order(&scaled)?;
    let z = incidence_matrix(table.masks())?;
    let w = weight_vector(table, options.infinite_multiplier)?;

    let mut t: Vec<f64> = scaled.iter().map(|v| v * options.init_scale).collect();
    let mut gamma = vec![0.0; p];
    let mut ctx = StepContext::new(&z, &w, &t, options.rho_inflation)?;

    let mut trace: Vec<f64> = Vec::new();
    let mut inner_total = 0;
    let mut converged = false;
    let mut degenerate = false;
    let mut outer_done = 0;
    let mut fit_t = t.clone();
    for outer in 1..=options.max_outer {
        outer_done = outer;
        let inner = gamma_solve(&ctx, options.sparsity, &gamma, options.inner_tol, options.max_inner)?;
        inner_total += inner.iterations;
        degenerate = inner.degenerate;
        gamma = inner.gamma;

        let delta = z.times(&gamma);
        let fit = isotonic_fit(&delta, w.as_slice(), &plan)?;
        fit_t = fit.t;
        t.copy_from_slice(&fit_t);
        ctx.set_target(&z, &w, &t)?;

        let objective = fit.objective;
        if let Some(&prev) = trace.last() {
            if relative_drop(prev, objective) <= options.outer_tol {
                trace.push(objective);
                converged = true;
                break;
            }
        }
        trace.push(objective);
    }
    let objective = *trace.last().unwrap();

    let transform_samples: Vec<(f64, f64)> = plan
        .permutation()
        .iter()
        .map(|&i| (nu[i], fit_t[i]))
        .collect();
    let beta = recover_beta(&gamma, &transform_samples)?;

    Ok(SisrSolution {
        p,
        sparsity: options.sparsity,
        gamma,
        transform_samples,
        beta,
        objective,
        outer_iterations: outer_done,
        inner_iterations: inner_total,
        converged,
        degenerate,
        objective_trace: trace,
        nu,
        t_hat: fit_t,
    })
}

/// Pulls scores back to the payoff scale by inverting the sampled transform:
/// payoffs sharing a fitted value are averaged, the resulting knots are
/// interpolated linearly, and queries beyond the sampled range extend the
/// terminal segments. Scores that are exactly zero map to exactly zero.
pub fn recover_beta(gamma: &[f64], transform_samples: &[(f64, f64)]) -> Result<Vec<f64>> {
    if transform_samples.is_empty() {
        return Err(SisrError::Structural(
            "transform has no samples to invert".into(),
        ));
    }
    // Knots on the t axis: group duplicate t values, average their nu.
    let mut knots: Vec<(f64, f64)> = Vec::new(); // (t, mean nu)
    let mut i = 0;
    while i < transform_samples.len() {
        let t_val = transform_samples[i].1;
        let mut sum = 0.0;
        let mut count = 0.0;
        while i < transform_samples.len() && transform_samples[i].1 == t_val {
            sum += transform_samples[i].0;
            count += 1.0;
            i += 1;
        }
        knots.push((t_val, sum / count));
    }
    if knots.len() < 2 {
        return Err(SisrError::Numerical(
            "fitted transform is constant and cannot be inverted".into(),
        ));
    }
    for pair in knots.windows(2) {
        if pair[1].0 <= pair[0].0 {
            return Err(SisrError::Structural(
                "transform samples are not sorted by fitted value".into(),
            ));
        }
    }
    let invert = |q: f64| -> f64 {
        let last = knots.len() - 1;
        // Segment index such that the query interpolates (or extends) it.
        let seg = match knots.binary_search_by(|(t, _)| t.partial_cmp(&q).unwrap()) {
            Ok(k) => return knots[k].1,
            Err(0) => 0,
            Err(k) if k > last => last - 1,
            Err(k) => k - 1,
        };
        let (t0, n0) = knots[seg];
        let (t1, n1) = knots[seg + 1];
        n0 + (q - t0) * (n1 - n0) / (t1 - t0)
    };
    Ok(gamma
        .iter()
        .map(|&g| if g == 0.0 { 0.0 } else { invert(g) })
        .collect())
}

/// One evaluated sparsity level of the information-criterion sweep.
#[derive(Debug, Clone)]
pub struct RicPoint {
    pub sparsity: usize,
    pub objective: f64,
    pub score: f64,
}

/// Result of sweeping sparsity levels and scoring each fit.
#[derive(Debug, Clone)]
pub struct RicSelection {
    pub selected: usize,
    pub curve: Vec<RicPoint>,
    /// Residual-variance estimate taken at the largest sparsity level.
    pub sigma2: f64,
}

/// Scores each sparsity level in `s_min..=s_max` with
/// `2 * objective / sigma2 + 2 * s * ln(p)`, where `sigma2` rescales the
/// loosest fit's residual by its degrees of freedom. Ties pick the smallest
/// level. When the loosest fit is exact the data is treated as noiseless and
/// the smallest level reaching an exact fit wins.
pub fn ric_select(
    table: &PayoffTable,
    s_min: usize,
    s_max: usize,
    base: &SolveOptions,
) -> Result<RicSelection> {
    let p = table.p();
    if s_min == 0 || s_min > s_max || s_max > p {
        return Err(SisrError::Domain(format!(
            "sparsity range {s_min}..={s_max} is invalid for p = {p}"
        )));
    }
    let finite_count = table.len().saturating_sub(2);
    if s_max >= finite_count {
        return Err(SisrError::Domain(format!(
            "largest sparsity {s_max} leaves no residual degrees of freedom \
             against {finite_count} finite-weight coalitions"
        )));
    }
    let mut objectives = Vec::with_capacity(s_max - s_min + 1);
    for s in s_min..=s_max {
        let solution = solve(table, &base.with_sparsity(s))?;
        objectives.push(solution.objective);
    }
    let loosest = *objectives.last().unwrap();
    let sigma2 = 2.0 * loosest / (finite_count - s_max) as f64;
    let log_p = (p as f64).ln();
    let curve: Vec<RicPoint> = objectives
        .iter()
        .enumerate()
        .map(|(i, &objective)| {
            let s = s_min + i;
            let ratio = if sigma2 > 0.0 {
                2.0 * objective / sigma2
            } else if objective == 0.0 {
                0.0
            } else {
                // Noiseless data: any inexact fit is infinitely worse, kept
                // finite so the curve stays serializable.
                1e300
            };
            RicPoint {
                sparsity: s,
                objective,
                score: ratio + 2.0 * s as f64 * log_p,
            }
        })
        .collect();
    let selected = curve
        .iter()
        .min_by(|a, b| {
            a.score
                .partial_cmp(&b.score)
                .unwrap()
                .then(a.sparsity.cmp(&b.sparsity))
        })
        .unwrap()
        .sparsity;
    Ok(RicSelection {
        selected,
        curve,
        sigma2,
    })
}

/// Conventional and calibrated attributions side by side, with both
/// rankings (1-based feature ids, most important first).
#[derive(Debug, Clone)]
pub struct PairedReport {
    pub shapley: ShapleyVector,
    pub sisr: SisrSolution,
    pub shapley_ranking: Vec<usize>,
    pub sisr_ranking: Vec<usize>,
}

pub fn conventional_and_calibrated(
    table: &PayoffTable,
    options: &SolveOptions,
) -> Result<PairedReport> {
    let shapley = exact_shapley(table)?;
    let sisr = solve(table, options)?;
    let shapley_ranking = ranking(&shapley.beta);
    let sisr_ranking = ranking(&sisr.gamma);
    Ok(PairedReport {
        shapley,
        sisr,
        shapley_ranking,
        sisr_ranking,
    })
}

/// How much worse a straight line in `nu` explains the additive scores than
/// the monotone fit does. Both residuals are weighted sums of squares against
/// the same target `Zγ̂`; large ratios mean the attribution needed a genuinely
/// nonlinear transform.
#[derive(Debug, Clone)]
pub struct LinearityGap {
    pub residual_linear: f64,
    pub residual_monotone: f64,
    pub ratio: f64,
}

pub fn linearity_gap(table: &PayoffTable, solution: &SisrSolution) -> Result<LinearityGap> {
    if solution.p != table.p() || solution.nu.len() != table.len() {
        return Err(SisrError::Structural(
            "solution does not belong to this table".into(),
        ));
    }
    let z = incidence_matrix(table.masks())?;
    let w = weight_vector(table, 10.0)?;
    let delta = z.times(&solution.gamma);
    let residual_monotone = weighted_residual(&delta, &solution.t_hat, w.as_slice());
    let line = weighted_line_fit(&solution.nu, &delta, w.as_slice())?;
    let fitted: Vec<f64> = solution.nu.iter().map(|x| line.0 + line.1 * x).collect();
    let residual_linear = weighted_residual(&delta, &fitted, w.as_slice());
    let ratio = if residual_monotone > 0.0 {
        residual_linear / residual_monotone
    } else if residual_linear == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    Ok(LinearityGap {
        residual_linear,
        residual_monotone,
        ratio,
    })
}

fn weighted_residual(target: &[f64], fitted: &[f64], weights: &[f64]) -> f64 {
    target
        .iter()
        .zip(fitted)
        .zip(weights)
        .map(|((a, b), w)| w * (a - b) * (a - b))
        .sum::<f64>()
}

/// Weighted simple regression `target ~ a + b x`.
fn weighted_line_fit(x: &[f64], target: &[f64], weights: &[f64]) -> Result<(f64, f64)> {
    let sw: f64 = weights.iter().sum();
    let mx: f64 = x.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / sw;
    let my: f64 = target.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for ((xv, yv), w) in x.iter().zip(target).zip(weights) {
        sxx += w * (xv - mx) * (xv - mx);
        sxy += w * (xv - mx) * (yv - my);
    }
    if sxx == 0.0 {
        return Err(SisrError::Numerical(
            "payoffs are constant; a line fit is undefined".into(),
        ));
    }
    let b = sxy / sxx;
    Ok((my - b * mx, b))
}

/// Dot product of the unit score vector with itself after a table solve is
/// 1; exposed for quick sanity checks in harnesses.
pub fn score_norm(solution: &SisrSolution) -> f64 {
    l2_norm(&solution.gamma)
}
