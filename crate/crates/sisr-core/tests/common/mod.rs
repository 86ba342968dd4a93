//! Brute-force reference implementations the fast code is checked against.
// Each test target compiles this module separately and uses its own subset.
#![allow(dead_code)]

use sisr_core::coalition::PayoffTable;
use sisr_core::isotonic::OrderPlan;
use sisr_core::rng::SplitMix64;

/// Exhaustive weighted isotonic regression: every way of cutting the sorted
/// tie groups into consecutive blocks is scored, keeping partitions whose
/// blockwise weighted means are non-decreasing. The optimum is piecewise
/// constant on consecutive groups, so the best feasible partition is the
/// exact solution.
pub fn isotonic_oracle(delta: &[f64], weights: &[f64], plan: &OrderPlan) -> (Vec<f64>, f64) {
    let groups = plan.tie_groups();
    let g = groups.len();
    let perm = plan.permutation();
    // Pooled per-group sums in sorted order.
    let mut gw = vec![0.0; g];
    let mut gs = vec![0.0; g];
    for (k, range) in groups.iter().enumerate() {
        for pos in range.clone() {
            let i = perm[pos];
            gw[k] += weights[i];
            gs[k] += weights[i] * delta[i];
        }
    }
    let mut best: Option<(Vec<f64>, f64)> = None;
    // Bit b of `cuts` set means a block boundary after group b.
    for cuts in 0..1u32 << (g - 1) {
        let mut level = vec![0.0; g];
        let mut start = 0;
        let mut feasible = true;
        let mut prev = f64::NEG_INFINITY;
        for end in 0..g {
            let boundary = end == g - 1 || cuts >> end & 1 == 1;
            if !boundary {
                continue;
            }
            let wsum: f64 = gw[start..=end].iter().sum();
            let ssum: f64 = gs[start..=end].iter().sum();
            let mean = ssum / wsum;
            if mean < prev {
                feasible = false;
                break;
            }
            for slot in level.iter_mut().take(end + 1).skip(start) {
                *slot = mean;
            }
            prev = mean;
            start = end + 1;
        }
        if !feasible {
            continue;
        }
        let mut objective = 0.0;
        let mut fitted = vec![0.0; delta.len()];
        for (k, range) in groups.iter().enumerate() {
            for pos in range.clone() {
                let i = perm[pos];
                fitted[i] = level[k];
                objective += 0.5 * weights[i] * (level[k] - delta[i]) * (level[k] - delta[i]);
            }
        }
        match &best {
            Some((_, obj)) if *obj <= objective => {}
            _ => best = Some((fitted, objective)),
        }
    }
    best.expect("at least the single-block partition is feasible")
}

/// Smallest projection distance from `y` to any s-sparse unit vector,
/// found by trying every support: the best vector on support `A` is
/// `y_A / ||y_A||`.
pub fn sparse_sphere_oracle(y: &[f64], s: usize) -> f64 {
    let p = y.len();
    let mut best = f64::INFINITY;
    let mut indices: Vec<usize> = (0..s).collect();
    loop {
        let norm_a: f64 = indices.iter().map(|&j| y[j] * y[j]).sum::<f64>().sqrt();
        if norm_a > 0.0 {
            let mut dist = 0.0;
            for j in 0..p {
                let b = if indices.contains(&j) {
                    y[j] / norm_a
                } else {
                    0.0
                };
                dist += (y[j] - b) * (y[j] - b);
            }
            best = best.min(dist);
        }
        // Next combination in lexicographic order.
        let mut i = s;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if indices[i] != i + p - s {
                break;
            }
        }
        indices[i] += 1;
        for k in i + 1..s {
            indices[k] = indices[k - 1] + 1;
        }
    }
}

pub fn random_full_table(p: usize, rng: &mut SplitMix64) -> PayoffTable {
    let values: Vec<f64> = (0..1usize << p)
        .map(|_| rng.next_f64() * 4.0 - 1.5)
        .collect();
    PayoffTable::full(p, values).unwrap()
}
