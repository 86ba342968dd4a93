//! Projection onto the sparse unit sphere and the hard-thresholded gradient
//! steps built on it.
//!
//! For a vector `y`, keeping its `s` largest-magnitude entries and dividing
//! by their norm is the closest point to `y` among unit vectors with at most
//! `s` nonzeros: over a fixed support the best unit vector is `y_A / ||y_A||`
//! at distance determined by `||y_A||`, so the best support is the one
//! maximizing `||y_A||`, which is exactly the top-`s` magnitude set.

use crate::coalition::{IncidenceMatrix, WeightVector};
use crate::error::{Result, SisrError};

/// A unit vector with a bounded number of nonzero entries.
#[derive(Debug, Clone)]
pub struct SparseUnitVector {
    gamma: Vec<f64>,
    sparsity_cap: usize,
}

impl SparseUnitVector {
    const NORM_TOL: f64 = 1e-8;

    pub fn new(gamma: Vec<f64>, sparsity_cap: usize) -> Result<Self> {
        let nnz = gamma.iter().filter(|g| **g != 0.0).count();
        if nnz > sparsity_cap {
            return Err(SisrError::Domain(format!(
                "vector has {nnz} nonzeros, above the sparsity cap {sparsity_cap}"
            )));
        }
        let norm = l2_norm(&gamma);
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(SisrError::Domain(format!(
                "vector norm {norm} is not 1 within {}",
                Self::NORM_TOL
            )));
        }
        Ok(Self {
            gamma,
            sparsity_cap,
        })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.gamma
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.gamma
    }

    pub fn sparsity_cap(&self) -> usize {
        self.sparsity_cap
    }

    /// 0-based indices of nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        support_of(&self.gamma)
    }
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn support_of(v: &[f64]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, g)| **g != 0.0)
        .map(|(j, _)| j)
        .collect()
}

/// Zeroes all but the `s` largest-magnitude entries. Magnitude ties at the
/// cut are broken toward the lowest index, so the result is deterministic.
pub fn hard_threshold(y: &[f64], s: usize) -> Result<Vec<f64>> {
    if s == 0 || s > y.len() {
        return Err(SisrError::Domain(format!(
            "sparsity level must lie in 1..={}, got {s}",
            y.len()
        )));
    }
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| {
        y[b].abs()
            .partial_cmp(&y[a].abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut out = vec![0.0; y.len()];
    for &i in &order[..s] {
        out[i] = y[i];
    }
    Ok(out)
}

/// Hard threshold followed by normalization to the unit sphere; the closest
/// `s`-sparse unit vector to `y`. Fails when the kept entries are all zero,
/// in which case no direction is preferred.
pub fn normalized_hard_threshold(y: &[f64], s: usize) -> Result<SparseUnitVector> {
    let kept = hard_threshold(y, s)?;
    let norm = l2_norm(&kept);
    if norm == 0.0 {
        return Err(SisrError::Numerical(
            "every candidate entry is zero; the projection is undefined".into(),
        ));
    }
    let gamma = kept.into_iter().map(|g| g / norm).collect();
    SparseUnitVector::new(gamma, s)
}

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    n: usize,
    data: Vec<f64>,
}

impl GramMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(SisrError::Structural("matrix must be square".into()));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        let m = Self { n, data };
        m.check_symmetric()?;
        Ok(m)
    }

    fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..i {
                if self.data[i * self.n + j] != self.data[j * self.n + i] {
                    return Err(SisrError::Structural(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// `G v` skipping zero entries of `v`.
    pub fn times_sparse(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.n);
        let mut out = vec![0.0; self.n];
        for (j, value) in v.iter().enumerate() {
            if *value == 0.0 {
                continue;
            }
            for i in 0..self.n {
                out[i] += self.data[i * self.n + j] * value;
            }
        }
        out
    }

    /// `Z^T W Z` accumulated entry by entry over the coalition masks, so the
    /// 0/1 structure is never materialized.
    pub fn weighted_gram(z: &IncidenceMatrix, w: &WeightVector) -> Result<Self> {
        if w.len() != z.n_rows() {
            return Err(SisrError::Structural(format!(
                "{} weights for {} incidence rows",
                w.len(),
                z.n_rows()
            )));
        }
        let p = z.p();
        let mut data = vec![0.0; p * p];
        for (mask, weight) in z.masks().iter().zip(w.as_slice()) {
            let members: Vec<usize> = mask.members().collect();
            for &a in &members {
                for &b in &members {
                    data[a * p + b] += weight;
                }
            }
        }
        Ok(Self { n: p, data })
    }
}

pub const SPECTRAL_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 100_000;

/// Largest eigenvalue of a symmetric positive semidefinite matrix. Sizes one
/// and two use the closed form; larger matrices use power iteration from the
/// all-ones vector with a Rayleigh-quotient stopping test at relative
/// tolerance `tol`.
pub fn spectral_norm(gram: &GramMatrix, tol: f64) -> Result<f64> {
    gram.check_symmetric()?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SisrError::Domain(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    let n = gram.n;
    match n {
        0 => return Err(SisrError::Structural("matrix is empty".into())),
        1 => return Ok(gram.data[0]),
        2 => {
            let (a, b, c) = (gram.data[0], gram.data[1], gram.data[3]);
            let mid = 0.5 * (a + c);
            let disc = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            return Ok(mid + disc);
        }
        _ => {}
    }
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda = 0.0_f64;
    for _ in 0..POWER_MAX_ITER {
        let av = gram.times_sparse(&v);
        let norm = l2_norm(&av);
        if norm == 0.0 {
            return Ok(0.0);
        }
        let rayleigh: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
        for (vi, avi) in v.iter_mut().zip(&av) {
            *vi = avi / norm;
        }
        if (rayleigh - lambda).abs() <= tol * rayleigh.abs().max(f64::MIN_POSITIVE) {
            return Ok(rayleigh);
        }
        lambda = rayleigh;
    }
    Ok(lambda)
}

/// Quantities fixed across gradient steps against one target vector:
/// `gram = Z^T W Z`, `linear = Z^T W t`, the step size bound `rho`, and the
/// constant `1/2 t^T W t` completing the quadratic objective.
#[derive(Debug, Clone)]
pub struct StepContext {
    gram: GramMatrix,
    linear: Vec<f64>,
    rho: f64,
    inflation: f64,
    constant: f64,
}

pub const DEFAULT_RHO_INFLATION: f64 = 1e-6;

impl StepContext {
    pub fn new(
        z: &IncidenceMatrix,
        w: &WeightVector,
        t: &[f64],
        inflation: f64,
    ) -> Result<Self> {
        if !(inflation >= 0.0 && inflation.is_finite()) {
            return Err(SisrError::Domain(format!(
                "rho inflation must be non-negative, got {inflation}"
            )));
        }
        let gram = GramMatrix::weighted_gram(z, w)?;
        let rho = (1.0 + inflation) * spectral_norm(&gram, SPECTRAL_TOL)?;
        if !(rho > 0.0) {
            return Err(SisrError::Numerical(
                "step size bound is zero; the weighted design has no mass".into(),
            ));
        }
        let mut ctx = Self {
            gram,
            linear: Vec::new(),
            rho,
            inflation,
            constant: 0.0,
        };
        ctx.set_target(z, w, t)?;
        Ok(ctx)
    }

    /// Re-points the context at a new target, reusing the gram matrix and
    /// step bound, which do not depend on `t`.
    pub fn set_target(&mut self, z: &IncidenceMatrix, w: &WeightVector, t: &[f64]) -> Result<()> {
        if t.len() != z.n_rows() || w.len() != z.n_rows() {
            return Err(SisrError::Structural(format!(
                "target of length {} against {} incidence rows",
                t.len(),
                z.n_rows()
            )));
        }
        let wt: Vec<f64> = w.as_slice().iter().zip(t).map(|(w, t)| w * t).collect();
        self.linear = z.transpose_times(&wt);
        self.constant = 0.5 * t.iter().zip(w.as_slice()).map(|(t, w)| w * t * t).sum::<f64>();
        Ok(())
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn inflation(&self) -> f64 {
        self.inflation
    }

    pub fn p(&self) -> usize {
        self.gram.n()
    }

    /// `1/2 (Z gamma - t)^T W (Z gamma - t)` evaluated through the cached
    /// quadratic pieces.
    pub fn objective_at(&self, gamma: &[f64]) -> f64 {
        let gv = self.gram.times_sparse(gamma);
        let quad: f64 = gamma.iter().zip(&gv).map(|(g, q)| g * q).sum();
        let lin: f64 = gamma.iter().zip(&self.linear).map(|(g, l)| g * l).sum();
        0.5 * quad - lin + self.constant
    }
}

/// `1/2 (Z gamma - t)^T W (Z gamma - t)` computed directly from the parts.
pub fn objective(
    gamma: &[f64],
    t: &[f64],
    z: &IncidenceMatrix,
    w: &WeightVector,
) -> Result<f64> {
    if gamma.len() != z.p() || t.len() != z.n_rows() || w.len() != z.n_rows() {
        return Err(SisrError::Structural(
            "objective arguments disagree on dimensions".into(),
        ));
    }
    let fitted = z.times(gamma);
    Ok(0.5
        * fitted
            .iter()
            .zip(t)
            .zip(w.as_slice())
            .map(|((f, t), w)| w * (f - t) * (f - t))
            .sum::<f64>())
}

/// One surrogate descent step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub gamma: Vec<f64>,
    /// True when the projection was undefined and the input was kept.
    pub degenerate: bool,
}

/// Moves `gamma` along the negative gradient scaled by `1/rho`, then
/// projects back onto the sparse unit sphere. With `rho` at least the gram
/// matrix's largest eigenvalue this never increases the objective.
pub fn gamma_step(gamma: &[f64], ctx: &StepContext, s: usize) -> Result<StepOutcome> {
    let p = ctx.p();
    if gamma.len() != p {
        return Err(SisrError::Structural(format!(
            "gamma of length {} against {p} features",
            gamma.len()
        )));
    }
    if s == 0 || s > p {
        return Err(SisrError::Domain(format!(
            "sparsity level must lie in 1..={p}, got {s}"
        )));
    }
    let gv = ctx.gram.times_sparse(gamma);
    let y: Vec<f64> = gamma
        .iter()
        .zip(&gv)
        .zip(&ctx.linear)
        .map(|((g, q), l)| g - (q - l) / ctx.rho)
        .collect();
    match normalized_hard_threshold(&y, s) {
        Ok(unit) => Ok(StepOutcome {
            gamma: unit.into_vec(),
            degenerate: false,
        }),
        Err(SisrError::Numerical(_)) => Ok(StepOutcome {
            gamma: gamma.to_vec(),
            degenerate: true,
        }),
        Err(other) => Err(other),
    }
}

/// Fixed-target inner solve: repeated [`gamma_step`]s until the iterate
/// stops moving.
#[derive(Debug, Clone)]
pub struct GammaSolve {
    pub gamma: Vec<f64>,
    pub iterations: usize,
    pub objective: f64,
    pub converged: bool,
    pub degenerate: bool,
    /// Objective after each step; non-increasing up to rounding.
    pub objective_trace: Vec<f64>,
    pub final_displacement: f64,
}

pub fn gamma_solve(
    ctx: &StepContext,
    s: usize,
    init: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<GammaSolve> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SisrError::Domain(format!(
            "convergence tolerance must be positive, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(SisrError::Domain("max_iter must be positive".into()));
    }
    let mut gamma = init.to_vec();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut degenerate = false;
    let mut iterations = 0;
    let mut displacement = f64::INFINITY;
    for _ in 0..max_iter {
        let step = gamma_step(&gamma, ctx, s)?;
        iterations += 1;
        displacement = step
            .gamma
            .iter()
            .zip(&gamma)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        degenerate = step.degenerate;
        gamma = step.gamma;
        trace.push(ctx.objective_at(&gamma));
        if displacement <= tol {
            converged = true;
            break;
        }
    }
    let objective = *trace.last().unwrap();
    Ok(GammaSolve {
        gamma,
        iterations,
        objective,
        converged,
        degenerate,
        objective_trace: trace,
        final_displacement: displacement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalition::{enumerate_masks, incidence_matrix, weight_vector, PayoffTable};

    fn unit_design(p: usize) -> (IncidenceMatrix, WeightVector) {
        // Full enumeration with the kernel weight vector at multiplier 10.
        let table = PayoffTable::full(p, vec![0.0; 1 << p]).unwrap();
        let z = incidence_matrix(table.masks()).unwrap();
        let w = weight_vector(&table, 10.0).unwrap();
        (z, w)
    }

    #[test]
    fn hard_threshold_keeps_largest_magnitudes() {
        assert_eq!(hard_threshold(&[3.0, 0.0, -4.0], 2).unwrap(), vec![3.0, 0.0, -4.0]);
        assert_eq!(hard_threshold(&[3.0, 0.5, -4.0], 2).unwrap(), vec![3.0, 0.0, -4.0]);
        assert_eq!(hard_threshold(&[1.0, 2.0, 3.0], 1).unwrap(), vec![0.0, 0.0, 3.0]);
    }

    #[test]
    fn hard_threshold_breaks_ties_toward_low_index() {
        assert_eq!(hard_threshold(&[1.0, -1.0, 0.0], 1).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(hard_threshold(&[-2.0, 2.0, 2.0], 2).unwrap(), vec![-2.0, 2.0, 0.0]);
    }

    #[test]
    fn hard_threshold_rejects_bad_sparsity() {
        assert!(hard_threshold(&[1.0], 0).is_err());
        assert!(hard_threshold(&[1.0], 2).is_err());
    }

    #[test]
    fn hard_threshold_scale_equivariance() {
        let y = [0.3, -2.0, 1.1, 0.0, 5.0];
        let scaled: Vec<f64> = y.iter().map(|v| v * -2.5).collect();
        let a = hard_threshold(&y, 3).unwrap();
        let b = hard_threshold(&scaled, 3).unwrap();
        for (x, z) in a.iter().zip(&b) {
            assert_eq!(*z, x * -2.5);
        }
    }

    #[test]
    fn normalized_threshold_hand_values() {
        let got = normalized_hard_threshold(&[3.0, 0.0, -4.0], 2).unwrap();
        assert_eq!(got.as_slice(), &[0.6, 0.0, -0.8]);
        let single = normalized_hard_threshold(&[0.0, 0.0, 5.0], 1).unwrap();
        assert_eq!(single.as_slice(), &[0.0, 0.0, 1.0]);
        let tied = normalized_hard_threshold(&[2.0, 1.0, 1.0], 2).unwrap();
        let norm = 5.0_f64.sqrt();
        assert!((tied.as_slice()[0] - 2.0 / norm).abs() < 1e-15);
        assert!((tied.as_slice()[1] - 1.0 / norm).abs() < 1e-15);
        assert_eq!(tied.as_slice()[2], 0.0);
    }

    #[test]
    fn normalized_threshold_rejects_zero_vector() {
        assert!(matches!(
            normalized_hard_threshold(&[0.0, 0.0], 1),
            Err(SisrError::Numerical(_))
        ));
    }

    #[test]
    fn sparse_unit_vector_validates() {
        assert!(SparseUnitVector::new(vec![0.6, 0.8, 0.0], 2).is_ok());
        assert!(SparseUnitVector::new(vec![0.6, 0.8, 0.0], 1).is_err());
        assert!(SparseUnitVector::new(vec![0.6, 0.7, 0.0], 2).is_err());
    }

    #[test]
    fn spectral_norm_closed_forms() {
        let id = GramMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(spectral_norm(&id, SPECTRAL_TOL).unwrap(), 1.0);
        let diag = GramMatrix::from_rows(vec![vec![4.0, 0.0], vec![0.0, 9.0]]).unwrap();
        assert_eq!(spectral_norm(&diag, SPECTRAL_TOL).unwrap(), 9.0);
        let m = GramMatrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((spectral_norm(&m, SPECTRAL_TOL).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_matches_unweighted_gram_example() {
        // Full enumeration at p = 2 with unit weights: Z^T Z = [[2,1],[1,2]].
        let masks = enumerate_masks(2).unwrap();
        let z = incidence_matrix(&masks).unwrap();
        let w = WeightVector::from_raw(vec![1.0; 4], 1.0);
        let gram = GramMatrix::weighted_gram(&z, &w).unwrap();
        assert_eq!(gram.get(0, 0), 2.0);
        assert_eq!(gram.get(0, 1), 1.0);
        assert!((spectral_norm(&gram, SPECTRAL_TOL).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_rejects_asymmetry() {
        let m = GramMatrix {
            n: 2,
            data: vec![1.0, 2.0, 3.0, 4.0],
        };
        assert!(spectral_norm(&m, SPECTRAL_TOL).is_err());
    }

    #[test]
    fn spectral_norm_power_iteration_matches_known_spectrum() {
        // diag(1, 2, 6) conjugated by a rotation in the (0, 2) plane.
        let (c, s) = (0.8, 0.6);
        let rows = vec![
            vec![c * c + 6.0 * s * s, 0.0, c * s * (6.0 - 1.0)],
            vec![0.0, 2.0, 0.0],
            vec![c * s * (6.0 - 1.0), 0.0, s * s + 6.0 * c * c],
        ];
        let m = GramMatrix::from_rows(rows).unwrap();
        let got = spectral_norm(&m, SPECTRAL_TOL).unwrap();
        assert!((got - 6.0).abs() < 1e-8, "got {got}");
    }

    #[test]
    fn step_context_caches_match_direct_objective() {
        let (z, w) = unit_design(3);
        let t: Vec<f64> = (0..z.n_rows()).map(|i| (i as f64) * 0.3 - 1.0).collect();
        let ctx = StepContext::new(&z, &w, &t, DEFAULT_RHO_INFLATION).unwrap();
        let gamma = [0.2, -0.7, 0.4];
        let direct = objective(&gamma, &t, &z, &w).unwrap();
        assert!((ctx.objective_at(&gamma) - direct).abs() < 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn gamma_step_from_zero_matches_hand_computation() {
        // p = 2 full enumeration with W = I.
        let masks = enumerate_masks(2).unwrap();
        let z = incidence_matrix(&masks).unwrap();
        let w = WeightVector::from_raw(vec![1.0; 4], 1.0);
        let gamma_star = [0.6, 0.8];
        let t = z.times(&gamma_star);
        // rho pinned to the spectral norm 3 of Z^T Z (inflation 0).
        let ctx = StepContext::new(&z, &w, &t, 0.0).unwrap();
        assert!((ctx.rho() - 3.0).abs() < 1e-9);
        let step = gamma_step(&[0.0, 0.0], &ctx, 2).unwrap();
        // y = (1/3) Z^T t = (1/3) [2.0, 2.2], normalized.
        let norm = (2.0_f64 * 2.0 + 2.2 * 2.2).sqrt();
        assert!((step.gamma[0] - 2.0 / norm).abs() < 1e-9);
        assert!((step.gamma[1] - 2.2 / norm).abs() < 1e-9);
        assert!((step.gamma[0] - 0.6727).abs() < 1e-4);
        assert!((step.gamma[1] - 0.7399).abs() < 1e-4);
    }

    #[test]
    fn gamma_step_never_increases_objective() {
        let (z, w) = unit_design(4);
        let mut rng = crate::rng::SplitMix64::new(11);
        for _ in 0..50 {
            let t: Vec<f64> = (0..z.n_rows()).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            let ctx = StepContext::new(&z, &w, &t, DEFAULT_RHO_INFLATION).unwrap();
            let mut gamma = normalized_hard_threshold(
                &(0..4).map(|_| rng.next_f64() - 0.5).collect::<Vec<_>>(),
                3,
            )
            .unwrap()
            .into_vec();
            for _ in 0..10 {
                let before = ctx.objective_at(&gamma);
                let step = gamma_step(&gamma, &ctx, 3).unwrap();
                let after = ctx.objective_at(&step.gamma);
                assert!(after <= before + 1e-12 * before.abs().max(1.0));
                gamma = step.gamma;
            }
        }
    }

    #[test]
    fn gamma_step_degenerate_keeps_input() {
        // Zero target and zero start: the gradient step stays at zero.
        let (z, w) = unit_design(3);
        let t = vec![0.0; z.n_rows()];
        let ctx = StepContext::new(&z, &w, &t, DEFAULT_RHO_INFLATION).unwrap();
        let step = gamma_step(&[0.0; 3], &ctx, 2).unwrap();
        assert!(step.degenerate);
        assert_eq!(step.gamma, vec![0.0; 3]);
    }

    #[test]
    fn gamma_solve_fixed_point_stops_immediately() {
        let (z, w) = unit_design(3);
        let gamma_star = normalized_hard_threshold(&[3.0, 4.0, 0.0], 2)
            .unwrap()
            .into_vec();
        let t = z.times(&gamma_star);
        let ctx = StepContext::new(&z, &w, &t, DEFAULT_RHO_INFLATION).unwrap();
        let solved = gamma_solve(&ctx, 2, &gamma_star, 1e-10, 100).unwrap();
        assert!(solved.converged);
        assert!(solved.iterations <= 2);
        for (a, b) in solved.gamma.iter().zip(&gamma_star) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn gamma_solve_recovers_noise_free_sparse_target() {
        let (z, w) = unit_design(6);
        let gamma_star = normalized_hard_threshold(&[3.0, 0.0, -2.0, 0.0, 1.0, 0.0], 3)
            .unwrap()
            .into_vec();
        let t = z.times(&gamma_star);
        let ctx = StepContext::new(&z, &w, &t, DEFAULT_RHO_INFLATION).unwrap();
        let solved = gamma_solve(&ctx, 3, &vec![0.0; 6], 1e-10, 10_000).unwrap();
        assert!(solved.converged);
        // The cached quadratic evaluation carries cancellation noise ~1e-15.
        assert!(solved.objective.abs() < 1e-12);
        for (a, b) in solved.gamma.iter().zip(&gamma_star) {
            assert!((a - b).abs() < 1e-8, "{:?} vs {:?}", solved.gamma, gamma_star);
        }
        // Trace is non-increasing.
        for pair in solved.objective_trace.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12);
        }
    }
}
