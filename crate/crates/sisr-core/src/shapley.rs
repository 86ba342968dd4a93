//! Conventional Shapley values over a fully enumerated payoff table, by two
//! independent routes: the marginal-contribution average and a constrained
//! weighted least squares. Agreement between them is the crate's main
//! cross-check for everything downstream.

use crate::coalition::{binomial, shapley_kernel_weight, PayoffTable};
use crate::error::{Result, SisrError};
use crate::linalg::cholesky_solve;

/// Max feature count for the marginal-contribution route (2^p table scans).
pub const MAX_EXACT_P: usize = 20;
/// Max feature count for the least-squares route.
pub const MAX_WLS_P: usize = 16;

/// Per-feature attribution plus the payoff baseline it is relative to.
#[derive(Debug, Clone)]
pub struct ShapleyVector {
    pub beta: Vec<f64>,
    /// The empty coalition's payoff before any adjustment.
    pub baseline: f64,
}

impl ShapleyVector {
    /// `sum(beta)` equals the grand coalition's payoff minus the baseline,
    /// up to rounding.
    pub fn efficiency_gap(&self, table: &PayoffTable) -> f64 {
        let total: f64 = self.beta.iter().sum();
        let span = table.values()[table.len() - 1] - table.baseline();
        total - span
    }
}

fn require_full(table: &PayoffTable, max_p: usize, route: &str) -> Result<()> {
    if !table.is_full_enumeration() {
        return Err(SisrError::Domain(format!(
            "{route} needs a fully enumerated table; this one holds {} of {} coalitions",
            table.len(),
            1u64 << table.p()
        )));
    }
    if table.p() > max_p {
        return Err(SisrError::Capacity {
            p: table.p(),
            budget: 1u128 << table.p(),
            max_p,
        });
    }
    Ok(())
}

/// Shapley values by direct enumeration: feature `j` receives the average
/// of `nu(A + j) - nu(A)` over subsets `A` not containing `j`, weighted by
/// `|A|! (p - |A| - 1)! / p!`.
pub fn exact_shapley(table: &PayoffTable) -> Result<ShapleyVector> {
    require_full(table, MAX_EXACT_P, "exact Shapley enumeration")?;
    let p = table.p();
    let values = table.values();
    // |A|!(p-|A|-1)!/p! = 1 / (p * C(p-1, |A|)), overflow-free at any p here.
    let size_weight: Vec<f64> = (0..p)
        .map(|k| 1.0 / (p as f64 * binomial(p - 1, k)))
        .collect();
    let mut beta = vec![0.0; p];
    for bits in 0..(1u32 << p) {
        let size = bits.count_ones() as usize;
        if size == p {
            continue; // the grand coalition is nobody's starting point
        }
        let base = values[bits as usize];
        let weight = size_weight[size];
        for (j, b) in beta.iter_mut().enumerate() {
            if bits >> j & 1 == 0 {
                *b += weight * (values[(bits | 1 << j) as usize] - base);
            }
        }
    }
    Ok(ShapleyVector {
        beta,
        baseline: table.baseline(),
    })
}

/// Shapley values as the solution of the kernel-weighted least squares over
/// proper coalitions, with the intercept fixed at the baseline and the
/// coefficients summing to the grand coalition's span. Both constraints are
/// eliminated exactly: the intercept by subtraction and the sum by writing
/// the last coefficient as the span minus the others.
pub fn wls_shapley(table: &PayoffTable) -> Result<ShapleyVector> {
    require_full(table, MAX_WLS_P, "least-squares Shapley")?;
    let p = table.p();
    let values = table.values();
    let baseline = table.baseline();
    let span = values[values.len() - 1] - baseline;
    if p == 1 {
        return Ok(ShapleyVector {
            beta: vec![span],
            baseline,
        });
    }
    let d = p - 1;
    // Residual for coalition A: (nu_A - baseline - [p in A] span)
    //                            - sum_{j<p} (1[j in A] - 1[p in A]) beta_j.
    let mut normal = vec![0.0; d * d];
    let mut rhs = vec![0.0; d];
    let mut row = vec![0.0; d];
    for (i, mask) in table.masks().iter().enumerate() {
        if mask.is_empty() || mask.is_full() {
            continue;
        }
        let w = shapley_kernel_weight(p, mask.size())?;
        let has_last = mask.contains(d);
        let shift = if has_last { 1.0 } else { 0.0 };
        for (j, r) in row.iter_mut().enumerate() {
            *r = if mask.contains(j) { 1.0 } else { 0.0 } - shift;
        }
        let y = values[i] - baseline - shift * span;
        for a in 0..d {
            if row[a] == 0.0 {
                continue;
            }
            rhs[a] += w * row[a] * y;
            for b in 0..d {
                normal[a * d + b] += w * row[a] * row[b];
            }
        }
    }
    let head = cholesky_solve(&normal, d, &rhs).map_err(|_| {
        SisrError::Numerical("constrained least-squares system is singular".into())
    })?;
    let mut beta = head;
    let tail = span - beta.iter().sum::<f64>();
    beta.push(tail);
    Ok(ShapleyVector { beta, baseline })
}

/// 1-based feature ids ordered by attribution, largest first; ties keep the
/// lower id first.
pub fn ranking(beta: &[f64]) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..beta.len()).collect();
    ids.sort_by(|&a, &b| beta[b].partial_cmp(&beta[a]).unwrap().then(a.cmp(&b)));
    ids.into_iter().map(|j| j + 1).collect()
}
