//! Synthetic payoff generators and the evaluation metrics used to judge
//! recovered attributions against a known truth.
//!
//! Three families of games are produced here: order-statistic games that
//! hide a known monotone transform, sparse noisy games built directly from
//! the additive model, and goodness-of-fit games where each coalition's
//! worth is the accuracy of a model retrained on that feature subset.

use std::time::Instant;

use rayon::prelude::*;

use crate::coalition::{
    enumerate_masks, shapley_kernel_weight, CoalitionMask, PayoffTable,
};
use crate::engine::{solve, SolveOptions};
use crate::error::{Result, SisrError};
use crate::linalg::{cholesky_factor, cholesky_solve, householder_least_squares};
use crate::rng::{normal_cdf, normal_quantile, SplitMix64};

/// Shapes available for the hidden monotone transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    FifthRoot,
    SquareRoot,
    Exponential,
    Logarithmic,
    Tangent,
    NormalCdf,
    CubeRoot,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::FifthRoot => "fifth-root",
            TransformKind::SquareRoot => "square-root",
            TransformKind::Exponential => "exponential",
            TransformKind::Logarithmic => "logarithmic",
            TransformKind::Tangent => "tangent",
            TransformKind::NormalCdf => "normal-cdf",
            TransformKind::CubeRoot => "cube-root",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "fifth-root" => Ok(TransformKind::FifthRoot),
            "square-root" => Ok(TransformKind::SquareRoot),
            "exponential" => Ok(TransformKind::Exponential),
            "logarithmic" => Ok(TransformKind::Logarithmic),
            "tangent" => Ok(TransformKind::Tangent),
            "normal-cdf" => Ok(TransformKind::NormalCdf),
            "cube-root" => Ok(TransformKind::CubeRoot),
            other => Err(SisrError::Config(format!(
                "unknown transform scheme '{other}'"
            ))),
        }
    }

    /// The six schemes the order-statistic generator accepts.
    pub fn generator_schemes() -> [TransformKind; 6] {
        [
            TransformKind::FifthRoot,
            TransformKind::SquareRoot,
            TransformKind::Exponential,
            TransformKind::Logarithmic,
            TransformKind::Tangent,
            TransformKind::NormalCdf,
        ]
    }
}

/// A concrete monotone transform `T` with its scale constant `c1` and, for
/// the normal-distribution shape, the location anchor `c2`.
#[derive(Debug, Clone)]
pub struct Transform {
    pub kind: TransformKind,
    pub c1: f64,
    pub c2: f64,
}

impl Transform {
    /// The transform with its conventional constants (`c1 = 10` for the
    /// tangent shape, `c1 = 1/sqrt(3)` for the normal shape, 1 otherwise)
    /// and no location shift.
    pub fn standard(kind: TransformKind) -> Self {
        let c1 = match kind {
            TransformKind::Tangent => 10.0,
            TransformKind::NormalCdf => 1.0 / 3.0_f64.sqrt(),
            _ => 1.0,
        };
        Self { kind, c1, c2: 0.0 }
    }

    pub fn with_anchor(kind: TransformKind, c2: f64) -> Self {
        Self {
            c2,
            ..Self::standard(kind)
        }
    }

    /// `T(x)`, the transform applied to a payoff.
    pub fn forward(&self, x: f64) -> f64 {
        match self.kind {
            TransformKind::FifthRoot => {
                if x == 0.0 {
                    0.0
                } else {
                    x.signum() * x.abs().powf(0.2)
                }
            }
            TransformKind::SquareRoot => x.sqrt(),
            TransformKind::Exponential => x.exp_m1(),
            TransformKind::Logarithmic => x.ln_1p(),
            TransformKind::Tangent => x.tan() / self.c1,
            TransformKind::NormalCdf => normal_cdf(x + self.c2) / (self.c1 * self.c1),
            TransformKind::CubeRoot => x.cbrt(),
        }
    }

    /// `T^{-1}(g)` where defined; `None` when `g` falls outside the
    /// transform's range.
    pub fn inverse_checked(&self, g: f64) -> Option<f64> {
        match self.kind {
            TransformKind::FifthRoot => Some(g.powi(5)),
            TransformKind::SquareRoot => (g >= 0.0).then(|| g * g),
            TransformKind::Exponential => (g > -1.0).then(|| g.ln_1p()),
            TransformKind::Logarithmic => Some(g.exp_m1()),
            TransformKind::Tangent => Some((self.c1 * g).atan()),
            TransformKind::NormalCdf => {
                let q = self.c1 * self.c1 * g;
                (q > 0.0 && q < 1.0).then(|| normal_quantile(q) - self.c2)
            }
            TransformKind::CubeRoot => Some(g.powi(3)),
        }
    }

    /// Nearest point of the transform's range, for draws that left it.
    fn clamp_to_range(&self, g: f64) -> f64 {
        match self.kind {
            TransformKind::SquareRoot => g.max(0.0),
            TransformKind::Exponential => g.max(-1.0 + 1e-12),
            TransformKind::NormalCdf => {
                let scale = self.c1 * self.c1;
                g.clamp(1e-15 / scale, (1.0 - 1e-15) / scale)
            }
            _ => g,
        }
    }

    /// The generator's raw map `Q`, related to the transform by
    /// `T = Q^{-1} / c1`.
    pub fn q(&self, y: f64) -> Option<f64> {
        self.inverse_checked(y / self.c1)
    }
}

/// What a generator actually hid inside a payoff table.
#[derive(Debug, Clone)]
pub struct GeneratorTruth {
    pub gamma_star: Vec<f64>,
    /// 0-based indices of the nonzero entries of `gamma_star`.
    pub support: Vec<usize>,
    pub transform: Transform,
    /// Score scale of the order-statistic game; absent for other games.
    pub c0: Option<f64>,
    pub sigma0: f64,
    pub seed: u64,
    /// Draws that exhausted their resampling budget and were clamped into
    /// the transform's range.
    pub clamp_events: usize,
}

fn check_p_enumerable(p: usize) -> Result<()> {
    if !(2..=20).contains(&p) {
        return Err(SisrError::Capacity {
            p,
            budget: 1u128 << p.min(127),
            max_p: 20,
        });
    }
    Ok(())
}

/// Order-statistic game: scores are consecutive powers of two, so the
/// coalition indexed by bit pattern `b` has true transformed worth
/// `c0 * b`; sorted uniform draws stand in for those worths and are pushed
/// through the inverse transform to produce payoffs.
pub fn gen_transform_payoffs(
    p: usize,
    kind: TransformKind,
    seed: u64,
) -> Result<(PayoffTable, GeneratorTruth)> {
    check_p_enumerable(p)?;
    if kind == TransformKind::CubeRoot {
        return Err(SisrError::Config(
            "cube-root is not an order-statistic scheme; use the sparse generator".into(),
        ));
    }
    let n = 1usize << p;
    // 4^p is exact in f64 for p <= 20.
    let c0 = (3.0 / ((1u64 << (2 * p)) as f64 - 1.0)).sqrt();
    let top = c0 * ((n - 1) as f64);
    let mut rng = SplitMix64::new(seed);
    let mut u: Vec<f64> = (0..n).map(|_| rng.next_open01() * top).collect();
    u.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let transform = if kind == TransformKind::NormalCdf {
        let base = Transform::standard(kind);
        // Anchor the smallest payoff at zero: c2 is the quantile the
        // smallest draw maps to before shifting.
        let c2 = normal_quantile(base.c1 * base.c1 * u[0]);
        Transform::with_anchor(kind, c2)
    } else {
        Transform::standard(kind)
    };
    let values: Vec<f64> = u
        .iter()
        .map(|&ui| {
            transform.inverse_checked(ui).ok_or_else(|| {
                SisrError::Numerical(format!(
                    "draw {ui} left the range of the {} transform",
                    transform.kind.name()
                ))
            })
        })
        .collect::<Result<_>>()?;
    let table = PayoffTable::full(p, values)?;
    let gamma_star: Vec<f64> = (0..p).map(|j| c0 * (1u64 << j) as f64).collect();
    let truth = GeneratorTruth {
        support: (0..p).collect(),
        gamma_star,
        transform,
        c0: Some(c0),
        sigma0: 0.0,
        seed,
        clamp_events: 0,
    };
    Ok((table, truth))
}

/// A unit vector splitting its mass evenly over the first `s_star` entries.
pub fn equal_sparse_gamma(p: usize, s_star: usize) -> Result<Vec<f64>> {
    if s_star == 0 || s_star > p {
        return Err(SisrError::Domain(format!(
            "support size must lie in 1..={p}, got {s_star}"
        )));
    }
    let mass = 1.0 / (s_star as f64).sqrt();
    Ok((0..p).map(|j| if j < s_star { mass } else { 0.0 }).collect())
}

const RESAMPLE_BUDGET: usize = 100;

/// Sparse additive game observed through a transform, with noise variance
/// inversely proportional to each coalition's kernel weight. The empty and
/// grand coalitions are recorded noiselessly at their model means.
pub fn gen_sparse_payoffs(
    p: usize,
    gamma_star: &[f64],
    transform: &Transform,
    sigma0: f64,
    seed: u64,
) -> Result<(PayoffTable, GeneratorTruth)> {
    check_p_enumerable(p)?;
    if gamma_star.len() != p {
        return Err(SisrError::Domain(format!(
            "scores of length {} against p = {p}",
            gamma_star.len()
        )));
    }
    let norm: f64 = gamma_star.iter().map(|g| g * g).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(SisrError::Domain(format!(
            "true scores must have unit norm, got {norm}"
        )));
    }
    if !(sigma0 >= 0.0 && sigma0.is_finite()) {
        return Err(SisrError::Domain(format!(
            "noise scale must be non-negative, got {sigma0}"
        )));
    }
    if transform.forward(0.0).abs() > 1e-12 {
        return Err(SisrError::Domain(
            "transform must map zero to zero for the sparse game".into(),
        ));
    }
    let n = 1usize << p;
    let total: f64 = gamma_star.iter().sum();
    let mut rng = SplitMix64::new(seed);
    let mut clamp_events = 0;
    let mut values = vec![0.0; n];
    for bits in 1..n - 1 {
        let size = (bits as u32).count_ones() as usize;
        let mean: f64 = (0..p)
            .filter(|j| bits >> j & 1 == 1)
            .map(|j| gamma_star[j])
            .sum();
        if sigma0 == 0.0 {
            values[bits] = transform.inverse_checked(mean).ok_or_else(|| {
                SisrError::Domain(format!(
                    "noiseless worth {mean} is outside the {} transform's range",
                    transform.kind.name()
                ))
            })?;
            continue;
        }
        let sd = sigma0 / shapley_kernel_weight(p, size)?.sqrt();
        let mut accepted = None;
        for _ in 0..RESAMPLE_BUDGET {
            let g = mean + sd * rng.standard_normal();
            if let Some(nu) = transform.inverse_checked(g) {
                accepted = Some(nu);
                break;
            }
        }
        values[bits] = match accepted {
            Some(nu) => nu,
            None => {
                clamp_events += 1;
                let g = transform.clamp_to_range(mean + sd * rng.standard_normal());
                transform.inverse_checked(g).ok_or_else(|| {
                    SisrError::Numerical(format!(
                        "clamped draw {g} still outside the {} transform's range",
                        transform.kind.name()
                    ))
                })?
            }
        };
    }
    values[0] = 0.0;
    values[n - 1] = transform.inverse_checked(total).ok_or_else(|| {
        SisrError::Domain(format!(
            "grand worth {total} is outside the {} transform's range",
            transform.kind.name()
        ))
    })?;
    let table = PayoffTable::full(p, values)?;
    let truth = GeneratorTruth {
        gamma_star: gamma_star.to_vec(),
        support: gamma_star
            .iter()
            .enumerate()
            .filter(|(_, g)| **g != 0.0)
            .map(|(j, _)| j)
            .collect(),
        transform: transform.clone(),
        c0: None,
        sigma0,
        seed,
        clamp_events,
    };
    Ok((table, truth))
}

/// Winner-takes-all game: a coalition is worth its best member.
pub fn gen_max_payoffs(p: usize, beta_star: &[f64]) -> Result<PayoffTable> {
    check_p_enumerable(p)?;
    if beta_star.len() != p {
        return Err(SisrError::Domain(format!(
            "worths of length {} against p = {p}",
            beta_star.len()
        )));
    }
    if beta_star.iter().any(|b| !(*b >= 0.0) || !b.is_finite()) {
        return Err(SisrError::Domain(
            "individual worths must be non-negative and finite".into(),
        ));
    }
    let values: Vec<f64> = (0..1usize << p)
        .map(|bits| {
            (0..p)
                .filter(|j| bits >> j & 1 == 1)
                .map(|j| beta_star[j])
                .fold(0.0, f64::max)
        })
        .collect();
    PayoffTable::full(p, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Continuous,
    Binary,
}

/// A regression data set with known coefficients and row correlation.
#[derive(Debug, Clone)]
pub struct RegressionDesign {
    /// Row-major `n x p`.
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub n: usize,
    pub p: usize,
    pub theta: f64,
    pub alpha_star: Vec<f64>,
    pub task: Task,
}

/// Draws rows from a zero-mean Gaussian with Toeplitz correlation
/// `theta^|i-j|`, then attaches a continuous or binary response generated
/// from the true coefficients.
pub fn gen_gaussian_design(
    n: usize,
    p: usize,
    theta: f64,
    alpha_star: &[f64],
    task: Task,
    seed: u64,
) -> Result<RegressionDesign> {
    if p == 0 || alpha_star.len() != p {
        return Err(SisrError::Domain(format!(
            "coefficients of length {} against p = {p}",
            alpha_star.len()
        )));
    }
    if n < p + 2 {
        return Err(SisrError::Domain(format!(
            "need at least p + 2 = {} rows, got {n}",
            p + 2
        )));
    }
    if !(theta.abs() < 1.0) {
        return Err(SisrError::Domain(format!(
            "correlation parameter must satisfy |theta| < 1, got {theta}"
        )));
    }
    let mut sigma = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..p {
            sigma[i * p + j] = theta.powi((i as i64 - j as i64).unsigned_abs() as i32);
        }
    }
    let chol = cholesky_factor(&sigma, p)?;
    let mut rng = SplitMix64::new(seed);
    let mut x = vec![0.0; n * p];
    for row in 0..n {
        let z: Vec<f64> = (0..p).map(|_| rng.standard_normal()).collect();
        for i in 0..p {
            let mut acc = 0.0;
            for j in 0..=i {
                acc += chol[i * p + j] * z[j];
            }
            x[row * p + i] = acc;
        }
    }
    let xb: Vec<f64> = (0..n)
        .map(|row| {
            (0..p)
                .map(|j| x[row * p + j] * alpha_star[j])
                .sum::<f64>()
        })
        .collect();
    let y: Vec<f64> = match task {
        Task::Continuous => xb.iter().map(|m| m + rng.standard_normal()).collect(),
        Task::Binary => xb
            .iter()
            .map(|m| {
                let pi = 1.0 / (1.0 + (-m).exp());
                if rng.next_f64() < pi {
                    1.0
                } else {
                    0.0
                }
            })
            .collect(),
    };
    Ok(RegressionDesign {
        x,
        y,
        n,
        p,
        theta,
        alpha_star: alpha_star.to_vec(),
        task,
    })
}

/// A goodness-of-fit payoff table plus the subsets whose fits needed care:
/// rank-deficient designs for least squares, non-converged fits for
/// logistic regression.
#[derive(Debug, Clone)]
pub struct SubsetFits {
    pub table: PayoffTable,
    pub flagged: Vec<CoalitionMask>,
}

fn subset_design(design: &RegressionDesign, mask: CoalitionMask) -> Vec<f64> {
    let k = mask.size() + 1;
    let mut cols = vec![0.0; design.n * k];
    for row in 0..design.n {
        cols[row * k] = 1.0;
        for (slot, j) in mask.members().enumerate() {
            cols[row * k + slot + 1] = design.x[row * design.p + j];
        }
    }
    cols
}

/// Worth of each feature subset as the R-squared of the least-squares fit
/// on that subset (intercept always included). The empty subset is worth
/// exactly zero.
pub fn r2_payoffs(design: &RegressionDesign) -> Result<SubsetFits> {
    if design.task != Task::Continuous {
        return Err(SisrError::Domain(
            "R-squared payoffs need a continuous response".into(),
        ));
    }
    if design.p > 15 {
        return Err(SisrError::Capacity {
            p: design.p,
            budget: 1u128 << design.p.min(127),
            max_p: 15,
        });
    }
    let masks = enumerate_masks(design.p)?;
    let intercept_only = vec![1.0; design.n];
    let base = householder_least_squares(&intercept_only, design.n, 1, &design.y);
    if base.rss <= 0.0 {
        return Err(SisrError::Numerical(
            "response is constant; R-squared is undefined".into(),
        ));
    }
    let fits: Vec<(f64, bool)> = masks
        .par_iter()
        .map(|mask| -> Result<(f64, bool)> {
            if mask.is_empty() {
                return Ok((0.0, false));
            }
            let cols = subset_design(design, *mask);
            let fit = householder_least_squares(&cols, design.n, mask.size() + 1, &design.y);
            Ok((1.0 - fit.rss / base.rss, fit.rank_deficient))
        })
        .collect::<Result<_>>()?;
    let mut flagged = Vec::new();
    let mut values = Vec::with_capacity(fits.len());
    for (mask, (value, deficient)) in masks.iter().zip(&fits) {
        if *deficient {
            flagged.push(*mask);
        }
        values.push(*value);
    }
    Ok(SubsetFits {
        table: PayoffTable::full(design.p, values)?,
        flagged,
    })
}

const IRLS_MAX_ITER: usize = 50;
const IRLS_TOL: f64 = 1e-8;
const IRLS_RIDGE: f64 = 1e-8;
const MU_FLOOR: f64 = 1e-12;

fn logistic_deviance(cols: &[f64], y: &[f64], n: usize, k: usize) -> Result<(f64, bool)> {
    let deviance_at = |beta: &[f64]| -> f64 {
        let mut dev = 0.0;
        for row in 0..n {
            let eta: f64 = (0..k).map(|j| cols[row * k + j] * beta[j]).sum();
            let mu = (1.0 / (1.0 + (-eta).exp())).clamp(MU_FLOOR, 1.0 - MU_FLOOR);
            dev -= 2.0 * (y[row] * mu.ln() + (1.0 - y[row]) * (1.0 - mu).ln());
        }
        dev
    };
    let mut beta = vec![0.0; k];
    let mut dev = deviance_at(&beta);
    let mut converged = false;
    for _ in 0..IRLS_MAX_ITER {
        // Weighted normal equations for the working response, with a ridge
        // term guarding against separation.
        let mut normal = vec![0.0; k * k];
        let mut rhs = vec![0.0; k];
        for row in 0..n {
            let eta: f64 = (0..k).map(|j| cols[row * k + j] * beta[j]).sum();
            let mu = (1.0 / (1.0 + (-eta).exp())).clamp(MU_FLOOR, 1.0 - MU_FLOOR);
            let w = mu * (1.0 - mu);
            let z = eta + (y[row] - mu) / w;
            for a in 0..k {
                let xa = cols[row * k + a];
                rhs[a] += w * xa * z;
                for b in 0..=a {
                    normal[a * k + b] += w * xa * cols[row * k + b];
                }
            }
        }
        for a in 0..k {
            for b in a + 1..k {
                normal[a * k + b] = normal[b * k + a];
            }
            normal[a * k + a] += IRLS_RIDGE;
        }
        let candidate = cholesky_solve(&normal, k, &rhs)?;
        // Near-separated responses make the full step overshoot; back off
        // toward the current iterate until the deviance stops rising, so the
        // recorded deviance is non-increasing across iterations.
        let mut accepted = None;
        let mut lambda = 1.0;
        for _ in 0..40 {
            let trial: Vec<f64> = beta
                .iter()
                .zip(&candidate)
                .map(|(b, c)| b + lambda * (c - b))
                .collect();
            let trial_dev = deviance_at(&trial);
            if trial_dev <= dev {
                accepted = Some((trial, trial_dev));
                break;
            }
            lambda *= 0.5;
        }
        let Some((next, next_dev)) = accepted else {
            break;
        };
        let change = dev - next_dev;
        beta = next;
        dev = next_dev;
        if change <= IRLS_TOL {
            converged = true;
            break;
        }
    }
    Ok((dev, converged))
}

/// Worth of each feature subset as the deviance-based pseudo R-squared of
/// a logistic fit on that subset. The empty subset is worth exactly zero.
pub fn pseudo_r2_payoffs(design: &RegressionDesign) -> Result<SubsetFits> {
    if design.task != Task::Binary {
        return Err(SisrError::Domain(
            "pseudo R-squared payoffs need a binary response".into(),
        ));
    }
    if design.p > 12 {
        return Err(SisrError::Capacity {
            p: design.p,
            budget: 1u128 << design.p.min(127),
            max_p: 12,
        });
    }
    if design.y.iter().any(|y| *y != 0.0 && *y != 1.0) {
        return Err(SisrError::Data(
            "binary response entries must be 0 or 1".into(),
        ));
    }
    let masks = enumerate_masks(design.p)?;
    let intercept_only = vec![1.0; design.n];
    let (null_dev, _) = logistic_deviance(&intercept_only, &design.y, design.n, 1)?;
    if null_dev <= 0.0 {
        return Err(SisrError::Numerical(
            "null deviance is zero; the response is degenerate".into(),
        ));
    }
    let fits: Vec<(f64, bool)> = masks
        .par_iter()
        .map(|mask| -> Result<(f64, bool)> {
            if mask.is_empty() {
                return Ok((0.0, true));
            }
            let cols = subset_design(design, *mask);
            let (dev, converged) =
                logistic_deviance(&cols, &design.y, design.n, mask.size() + 1)?;
            Ok((1.0 - dev / null_dev, converged))
        })
        .collect::<Result<_>>()?;
    let mut flagged = Vec::new();
    let mut values = Vec::with_capacity(fits.len());
    for (mask, (value, converged)) in masks.iter().zip(&fits) {
        if !*converged {
            flagged.push(*mask);
        }
        values.push(*value);
    }
    Ok(SubsetFits {
        table: PayoffTable::full(design.p, values)?,
        flagged,
    })
}

/// Alignment of two unit vectors, scaled to percent: 100 means identical,
/// 0 orthogonal, and the sign is kept.
pub fn affinity(gamma_hat: &[f64], gamma_star: &[f64]) -> Result<f64> {
    if gamma_hat.len() != gamma_star.len() {
        return Err(SisrError::Domain(format!(
            "vectors of lengths {} and {}",
            gamma_hat.len(),
            gamma_star.len()
        )));
    }
    for (name, v) in [("estimate", gamma_hat), ("truth", gamma_star)] {
        let norm: f64 = v.iter().map(|g| g * g).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(SisrError::Domain(format!(
                "{name} must have unit norm, got {norm}"
            )));
        }
    }
    Ok(gamma_hat
        .iter()
        .zip(gamma_star)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        * 100.0)
}

/// Percentage of the true support indices that carry a nonzero estimate.
pub fn support_recovery(gamma_hat: &[f64], support_star: &[usize]) -> Result<f64> {
    if support_star.is_empty() {
        return Err(SisrError::Domain("true support is empty".into()));
    }
    if let Some(&bad) = support_star.iter().find(|j| **j >= gamma_hat.len()) {
        return Err(SisrError::Domain(format!(
            "support index {bad} outside 0..{}",
            gamma_hat.len()
        )));
    }
    let hit = support_star
        .iter()
        .filter(|j| gamma_hat[**j] != 0.0)
        .count();
    Ok(hit as f64 / support_star.len() as f64 * 100.0)
}

/// Pearson correlation coefficient.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(SisrError::Domain(
            "correlation needs two equal-length samples of size >= 2".into(),
        ));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    let mut sab = 0.0;
    for (x, y) in a.iter().zip(b) {
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
        sab += (x - ma) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(SisrError::Numerical(
            "correlation is undefined for a constant sample".into(),
        ));
    }
    Ok(sab / (saa * sbb).sqrt())
}

/// Median-of-three wall time per sparsity level.
#[derive(Debug, Clone)]
pub struct TimingRow {
    pub sparsity: usize,
    pub median_seconds: f64,
}

pub fn timing_sweep(
    table: &PayoffTable,
    s_values: &[usize],
    base: &SolveOptions,
) -> Result<Vec<TimingRow>> {
    if s_values.is_empty() {
        return Err(SisrError::Domain("no sparsity levels to time".into()));
    }
    let mut rows = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let mut times = [0.0; 3];
        for t in &mut times {
            let started = Instant::now();
            solve(table, &base.with_sparsity(s))?;
            *t = started.elapsed().as_secs_f64();
        }
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        rows.push(TimingRow {
            sparsity: s,
            median_seconds: times[1],
        });
    }
    rows.sort_by_key(|row| row.sparsity);
    Ok(rows)
}
