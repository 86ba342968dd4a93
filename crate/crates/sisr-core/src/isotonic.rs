//! Weighted isotonic regression along a payoff-determined order.
//!
//! The order is fixed once per table: entries are sorted by payoff with a
//! stable sort, and entries sharing a payoff form a tie group whose fitted
//! values must coincide. The fit itself is pool-adjacent-violators run over
//! the tie-pooled sequence with a block stack, which is linear in the input
//! after sorting.

use std::ops::Range;

use crate::error::{Result, SisrError};

/// Sorted traversal order of a value vector plus its tie structure.
#[derive(Debug, Clone)]
pub struct OrderPlan {
    /// `permutation[k]` is the original index of the k-th smallest value.
    permutation: Vec<usize>,
    /// Maximal runs of equal values, as ranges of sorted positions.
    tie_groups: Vec<Range<usize>>,
}

impl OrderPlan {
    pub fn len(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutation.is_empty()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn tie_groups(&self) -> &[Range<usize>] {
        &self.tie_groups
    }
}

/// Stable argsort of `nu` with maximal tie groups. Rejects NaN by index;
/// every other float sorts totally.
pub fn build_order(nu: &[f64]) -> Result<OrderPlan> {
    if let Some(i) = nu.iter().position(|v| v.is_nan()) {
        return Err(SisrError::Data(format!("payoff at index {i} is NaN")));
    }
    let mut permutation: Vec<usize> = (0..nu.len()).collect();
    permutation.sort_by(|&a, &b| nu[a].partial_cmp(&nu[b]).unwrap());
    let mut tie_groups = Vec::new();
    let mut start = 0;
    for k in 1..=permutation.len() {
        if k == permutation.len() || nu[permutation[k]] != nu[permutation[start]] {
            tie_groups.push(start..k);
            start = k;
        }
    }
    Ok(OrderPlan {
        permutation,
        tie_groups,
    })
}

/// Result of an isotonic fit, reported in the original entry order.
#[derive(Debug, Clone)]
pub struct IsotonicFit {
    /// Fitted values, non-decreasing along the plan's order and constant
    /// within tie groups.
    pub t: Vec<f64>,
    /// Half the weighted squared residual between the fit and the data.
    pub objective: f64,
    /// Level sets of the fit as ranges of sorted positions; each covers
    /// whole tie groups.
    pub block_boundaries: Vec<Range<usize>>,
}

#[derive(Clone, Copy)]
struct Block {
    sum: f64,    // weighted sum of pooled values
    weight: f64, // total weight
    groups: usize,
}

impl Block {
    fn mean(&self) -> f64 {
        self.sum / self.weight
    }
}

/// Minimizes `1/2 * sum_i w_i (t_i - delta_i)^2` over vectors `t` that are
/// non-decreasing in the plan's order and constant within its tie groups.
pub fn isotonic_fit(delta: &[f64], weights: &[f64], plan: &OrderPlan) -> Result<IsotonicFit> {
    let n = plan.len();
    if delta.len() != n || weights.len() != n {
        return Err(SisrError::Structural(format!(
            "isotonic fit over {n} positions got {} values and {} weights",
            delta.len(),
            weights.len()
        )));
    }
    if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(SisrError::Domain(format!(
            "weight at index {i} must be positive and finite, got {}",
            weights[i]
        )));
    }
    if let Some(i) = delta.iter().position(|d| !d.is_finite()) {
        return Err(SisrError::Data(format!(
            "fit target at index {i} is not finite"
        )));
    }

    // Pre-pool every tie group to a single weighted point, then sweep with a
    // block stack, merging while the top two block means decrease.
    let mut stack: Vec<Block> = Vec::with_capacity(plan.tie_groups.len());
    for group in &plan.tie_groups {
        let mut sum = 0.0;
        let mut weight = 0.0;
        for k in group.clone() {
            let i = plan.permutation[k];
            sum += weights[i] * delta[i];
            weight += weights[i];
        }
        let mut block = Block {
            sum,
            weight,
            groups: 1,
        };
        while let Some(prev) = stack.last() {
            if prev.mean() > block.mean() {
                block.sum += prev.sum;
                block.weight += prev.weight;
                block.groups += prev.groups;
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(block);
    }

    let mut t = vec![0.0; n];
    let mut block_boundaries = Vec::with_capacity(stack.len());
    let mut group_idx = 0;
    let mut pos = 0;
    for block in &stack {
        let level = block.mean();
        let start = pos;
        for _ in 0..block.groups {
            let group = &plan.tie_groups[group_idx];
            for k in group.clone() {
                t[plan.permutation[k]] = level;
            }
            pos = group.end;
            group_idx += 1;
        }
        block_boundaries.push(start..pos);
    }

    let objective = 0.5
        * delta
            .iter()
            .zip(weights)
            .zip(&t)
            .map(|((d, w), f)| w * (f - d) * (f - d))
            .sum::<f64>();

    Ok(IsotonicFit {
        t,
        objective,
        block_boundaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> OrderPlan {
        build_order(&(0..n).map(|i| i as f64).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn build_order_sorts_stably_and_groups_ties() {
        let plan = build_order(&[0.0, 2.0, 1.0, 2.0]).unwrap();
        assert_eq!(plan.permutation(), &[0, 2, 1, 3]);
        assert_eq!(plan.tie_groups(), &[0..1, 1..2, 2..4]);
    }

    #[test]
    fn build_order_rejects_nan_by_index() {
        let err = build_order(&[0.0, f64::NAN, 1.0]).unwrap_err();
        assert!(err.to_string().contains("index 1"), "{err}");
    }

    #[test]
    fn monotone_input_is_untouched() {
        let fit = isotonic_fit(&[1.0, 2.0, 3.0], &[1.0; 3], &chain(3)).unwrap();
        assert_eq!(fit.t, vec![1.0, 2.0, 3.0]);
        assert_eq!(fit.objective, 0.0);
        assert_eq!(fit.block_boundaries, vec![0..1, 1..2, 2..3]);
    }

    #[test]
    fn single_violation_pools_to_plain_mean() {
        let fit = isotonic_fit(&[3.0, 1.0], &[1.0, 1.0], &chain(2)).unwrap();
        assert_eq!(fit.t, vec![2.0, 2.0]);
        assert_eq!(fit.block_boundaries, vec![0..2]);
        // objective = 1/2 * ((2-3)^2 + (2-1)^2)
        assert!((fit.objective - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pooling_respects_weights() {
        let fit = isotonic_fit(&[3.0, 1.0], &[1.0, 3.0], &chain(2)).unwrap();
        assert_eq!(fit.t, vec![1.5, 1.5]);
    }

    #[test]
    fn tie_groups_are_pooled_before_the_sweep() {
        // nu = [0, 1, 1]: the last two entries form one tie group.
        let plan = build_order(&[0.0, 1.0, 1.0]).unwrap();
        let fit = isotonic_fit(&[0.0, 3.0, 1.0], &[1.0; 3], &plan).unwrap();
        assert_eq!(fit.t, vec![0.0, 2.0, 2.0]);
        assert_eq!(fit.block_boundaries, vec![0..1, 1..3]);
    }

    #[test]
    fn fit_follows_plan_order_not_input_order() {
        // Descending nu reverses the chain: fitting [1, 2] along it pools.
        let plan = build_order(&[2.0, 1.0]).unwrap();
        let fit = isotonic_fit(&[1.0, 2.0], &[1.0, 1.0], &plan).unwrap();
        assert_eq!(fit.t, vec![1.5, 1.5]);
    }

    #[test]
    fn rejects_nonpositive_weights_and_length_mismatch() {
        let plan = chain(2);
        assert!(isotonic_fit(&[1.0, 2.0], &[1.0, 0.0], &plan).is_err());
        assert!(isotonic_fit(&[1.0, 2.0], &[1.0, -1.0], &plan).is_err());
        assert!(isotonic_fit(&[1.0], &[1.0, 1.0], &plan).is_err());
    }

    #[test]
    fn fit_is_idempotent() {
        let plan = chain(6);
        let fit = isotonic_fit(&[3.0, 1.0, 4.0, 1.0, 5.0, 2.0], &[1.0, 2.0, 1.0, 3.0, 1.0, 2.0], &plan)
            .unwrap();
        let again = isotonic_fit(&fit.t, &[1.0, 2.0, 1.0, 3.0, 1.0, 2.0], &plan).unwrap();
        for (a, b) in fit.t.iter().zip(&again.t) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(again.objective < 1e-28);
    }

    #[test]
    fn fit_preserves_global_weighted_mean() {
        let plan = chain(5);
        let delta = [2.0, -1.0, 0.5, 3.0, -2.0];
        let weights = [1.0, 2.0, 0.5, 1.5, 3.0];
        let fit = isotonic_fit(&delta, &weights, &plan).unwrap();
        let before: f64 = delta.iter().zip(&weights).map(|(d, w)| d * w).sum();
        let after: f64 = fit.t.iter().zip(&weights).map(|(t, w)| t * w).sum();
        assert!((before - after).abs() < 1e-12);
    }
}
