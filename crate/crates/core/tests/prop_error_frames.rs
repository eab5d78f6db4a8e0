//! Knill–Laflamme verdicts against the factorization picture.

mod common;

use common::{code, hermitian_pauli, TOL};
use proptest::prelude::*;
use qrfcode_core::dense;
use qrfcode_core::error_frames::{
    build_factorization, build_maximal_error_set, factorized_action_is_gauge_only, kl_check,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kl_verdict_matches_gauge_only_action(
        (code, errors) in code(2..=5).prop_flat_map(|c| { let n = c.n(); (Just(c), prop::collection::vec(hermitian_pauli(n), 1..5)) })
    ) {
        let verdict = kl_check(&code, &errors).unwrap().correctable;
        prop_assert_eq!(factorized_action_is_gauge_only(&code, &errors, TOL).unwrap(), verdict);
    }

    #[test]
    fn gauge_factor_carries_the_regular_representation(code in code(2..=5)) {
        let fact = build_factorization(&code, &build_maximal_error_set(&code, &[]).unwrap()).unwrap();
        for g in 0..fact.order() {
            for h in 0..fact.order() {
                let moved = fact.gauge_representation(g) * fact.group_basis_state(h);
                prop_assert!(dense::max_abs_diff_state(&moved, &fact.group_basis_state(g ^ h)) < TOL);
            }
        }
        prop_assert!(fact.unitarity_deviation() < TOL);
        prop_assert!(fact.covariance_deviation().unwrap() < TOL);
    }
}
