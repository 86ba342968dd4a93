use proptest::prelude::*;
use sisr_core::engine::{solve, SolveOptions};
use sisr_core::lab::{
    gen_gaussian_design, gen_transform_payoffs, pearson, pseudo_r2_payoffs, r2_payoffs, Task,
    TransformKind,
};

#[test]
fn every_scheme_round_trips_through_the_solver_at_small_p() {
    for kind in TransformKind::generator_schemes() {
        let (table, truth) = gen_transform_payoffs(8, kind, 23).unwrap();
        let solution = solve(&table, &SolveOptions::new(8)).unwrap();
        let true_scale: Vec<f64> = table
            .values()
            .iter()
            .map(|&nu| truth.transform.forward(nu))
            .collect();
        let r = pearson(&solution.t_hat, &true_scale).unwrap();
        assert!(r >= 0.95, "{}: correlation {r}", kind.name());
    }
}

#[test]
fn r2_and_pseudo_r2_tables_feed_the_solver() {
    let alpha = vec![3.0; 6];
    let design = gen_gaussian_design(30, 6, 0.5, &alpha, Task::Continuous, 7).unwrap();
    let fits = r2_payoffs(&design).unwrap();
    let solution = solve(&fits.table, &SolveOptions::new(6)).unwrap();
    assert!(solution.objective.is_finite());
    assert!(solution.support().len() <= 6 && !solution.support().is_empty());

    let design = gen_gaussian_design(30, 6, 0.5, &alpha, Task::Binary, 8).unwrap();
    let fits = pseudo_r2_payoffs(&design).unwrap();
    let solution = solve(&fits.table, &SolveOptions::new(6)).unwrap();
    assert!(solution.objective.is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn r2_payoffs_are_monotone_on_random_designs(
        p in 3usize..6,
        theta in -0.7..0.7f64,
        seed in 0u64..1000,
    ) {
        let alpha: Vec<f64> = (0..p).map(|j| 1.0 + j as f64).collect();
        let design = gen_gaussian_design(5 * p + 4, p, theta, &alpha, Task::Continuous, seed).unwrap();
        let fits = r2_payoffs(&design).unwrap();
        let values = fits.table.values();
        prop_assert_eq!(values[0], 0.0);
        for bits in 0..values.len() {
            for j in 0..p {
                if bits >> j & 1 == 0 {
                    prop_assert!(values[bits] <= values[bits | 1 << j]);
                }
            }
        }
    }

    #[test]
    fn transform_games_stay_sorted_for_any_seed(
        seed in 0u64..5000,
        scheme_index in 0usize..6,
    ) {
        let kind = TransformKind::generator_schemes()[scheme_index];
        let (table, truth) = gen_transform_payoffs(5, kind, seed).unwrap();
        let values = table.values();
        for pair in values.windows(2) {
            prop_assert!(pair[0] <= pair[1]);
        }
        // Forward-mapping restores the uniform draws' ordering exactly.
        let mut prev = f64::NEG_INFINITY;
        for &nu in values {
            let u = truth.transform.forward(nu);
            prop_assert!(u >= prev);
            prev = u;
        }
    }
}
