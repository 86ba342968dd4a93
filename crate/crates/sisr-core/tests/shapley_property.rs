use proptest::prelude::*;
use sisr_core::coalition::PayoffTable;
use sisr_core::shapley::{exact_shapley, wls_shapley};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn efficiency_and_route_agreement(p in 2usize..6, seed_values in prop::collection::vec(-10.0..10.0f64, 64)) {
        let values = seed_values[..1 << p].to_vec();
        let table = PayoffTable::full(p, values).unwrap();
        let exact = exact_shapley(&table).unwrap();
        prop_assert!(exact.efficiency_gap(&table).abs() < 1e-9);
        let wls = wls_shapley(&table).unwrap();
        for (a, b) in exact.beta.iter().zip(&wls.beta) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn attribution_is_linear_in_the_game(p in 2usize..5, va in prop::collection::vec(-5.0..5.0f64, 32), vb in prop::collection::vec(-5.0..5.0f64, 32), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let n = 1usize << p;
        let ta = PayoffTable::full(p, va[..n].to_vec()).unwrap();
        let tb = PayoffTable::full(p, vb[..n].to_vec()).unwrap();
        let mixed: Vec<f64> = (0..n).map(|i| a * va[i] + b * vb[i]).collect();
        let tm = PayoffTable::full(p, mixed).unwrap();
        let sa = exact_shapley(&ta).unwrap();
        let sb = exact_shapley(&tb).unwrap();
        let sm = exact_shapley(&tm).unwrap();
        for j in 0..p {
            let expect = a * sa.beta[j] + b * sb.beta[j];
            prop_assert!((sm.beta[j] - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn attribution_is_equivariant_under_relabeling(p in 2usize..5, values in prop::collection::vec(-5.0..5.0f64, 32), shift in 0usize..4) {
        let n = 1usize << p;
        let sigma = |j: usize| (j + shift) % p;
        let mut permuted = vec![0.0; n];
        for bits in 0..n {
            let mut new_bits = 0usize;
            for j in 0..p {
                if bits >> j & 1 == 1 {
                    new_bits |= 1 << sigma(j);
                }
            }
            permuted[new_bits] = values[bits];
        }
        let base = exact_shapley(&PayoffTable::full(p, values[..n].to_vec()).unwrap()).unwrap();
        let moved = exact_shapley(&PayoffTable::full(p, permuted).unwrap()).unwrap();
        for j in 0..p {
            prop_assert!((base.beta[j] - moved.beta[sigma(j)]).abs() < 1e-10);
        }
    }
}
