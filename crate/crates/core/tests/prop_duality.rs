//! Recovery channels and complementarity on random codes.

mod common;

use common::{code, TOL};
use proptest::prelude::*;
use qrfcode_core::dense;
use qrfcode_core::duality::{
    blanket_recovery_min_eigenvalue, complementarity_deviation, dual_rep_from_basis, electric_recovery,
};
use qrfcode_core::error_frames::build_maximal_error_set;
use qrfcode_core::qrf_local::{LocalFrame, SeedBasis};
use qrfcode_core::stabilizer::encode_computational;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn electric_recovery_restores_code_states(
        (code, logical) in code(2..=4).prop_flat_map(|c| { let k = c.k(); (Just(c), common::state(k)) })
    ) {
        let psi = encode_computational(&code, &logical).unwrap();
        let rho = dense::outer(&psi, &psi);
        let errors = build_maximal_error_set(&code, &[]).unwrap();
        for e in &errors {
            let em = dense::pauli_matrix(e).unwrap();
            let out = electric_recovery(&code, &errors, &(&em * &rho * em.adjoint())).unwrap();
            prop_assert!(dense::max_abs_diff(&out, &rho) < TOL);
        }
    }

    #[test]
    fn charges_and_dual_charges_are_complementary(code in code(2..=4)) {
        let rep = dual_rep_from_basis(&LocalFrame::new(&code, None, &SeedBasis::X).unwrap()).unwrap();
        prop_assert!(complementarity_deviation(&rep).unwrap() < TOL);
    }

    #[test]
    fn blanket_recovery_is_not_an_operation(code in code(2..=5)) {
        let min = blanket_recovery_min_eigenvalue(&code).unwrap();
        let expected = 1.0 - (1u64 << code.m()) as f64;
        prop_assert!((min - expected).abs() < TOL);
        prop_assert!(min < 0.0);
    }
}
