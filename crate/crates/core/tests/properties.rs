use proptest::prelude::*;

use qedge::combinatorics::{hypothesis_range, overlap_closed, overlap_oracle, StringParams};
use qedge::discrimination::{total_success, Method, Scenario, ScenarioSpec, SolveOptions};
use qedge::gram::{build_gram_unknown, tridiag_check};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn overlaps_agree_with_oracle(n in 1u32..=12, lambda_seed in 0u32..100, a in 0u32..100, b in 0u32..100) {
        let lambda = lambda_seed % (n / 2 + 1);
        let ks: Vec<u32> = hypothesis_range(n, lambda).collect();
        let k = ks[a as usize % ks.len()];
        let kp = ks[b as usize % ks.len()];
        let c = overlap_closed(n, k, kp, lambda).unwrap();
        let o = overlap_oracle(n, k, kp, lambda).unwrap();
        prop_assert!((c - o).abs() <= 1e-12);
        prop_assert!((overlap_closed(n, kp, k, lambda).unwrap() - c).abs() <= 1e-15);
    }

    #[test]
    fn gram_is_psd_with_prior_trace(n in 2u32..=40, d in 2u32..=6, lambda_seed in 0u32..100) {
        let params = StringParams::new(n, d).unwrap();
        let lambda = lambda_seed % (n / 2 + 1);
        let g = build_gram_unknown(params, lambda).unwrap();
        let eig = g.dense().as_matrix().clone().symmetric_eigenvalues();
        prop_assert!(eig.min() >= -1e-12 * eig.max().max(1e-300));
        prop_assert!(g.diagonal().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn tridiagonal_inverse_holds(n in 2u32..=40, d in 2u32..=4, lambda_seed in 0u32..100) {
        let lambda = 1 + lambda_seed % (n / 2);
        let c = tridiag_check(StringParams::new(n, d).unwrap(), lambda).unwrap();
        prop_assume!(c.condition_number <= 1e12);
        prop_assert!(c.relative_deviation <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn success_is_ordered(n in 2u32..=16, d in 2u32..=4, known in any::<bool>()) {
        let scenario = if known { Scenario::KnownUnknown } else { Scenario::UnknownUnknown };
        let opts = SolveOptions::default();
        let srm = total_success(ScenarioSpec::new(scenario, n, d, Method::Srm).unwrap(), &opts).unwrap().total;
        let sdp = total_success(ScenarioSpec::new(scenario, n, d, Method::Sdp).unwrap(), &opts).unwrap().total;
        prop_assert!(1.0 / n as f64 <= srm + 1e-12);
        prop_assert!(srm <= sdp + 1e-8);
        prop_assert!(sdp <= 1.0 + 1e-9);
    }
}
