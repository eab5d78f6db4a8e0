//! Random stabilizer codes: group tables, projectors and isotypes.

mod common;

use common::{code, TOL};
use proptest::prelude::*;
use qrfcode_core::dense::{self, c};
use qrfcode_core::duality::{charge_measurement, stabilizer_twirl};
use qrfcode_core::error_frames::build_maximal_error_set;
use qrfcode_core::stabilizer::{apply_code_projector, code_projector, isotype_projector};
use qrfcode_core::{Character, PauliOperator};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_table_closes_with_exact_phases(code in code(2..=6)) {
        let table = code.group_table();
        for g in 0..table.len() {
            for h in 0..table.len() {
                prop_assert_eq!(table[g].multiply(&table[h]).unwrap(), table[g ^ h].clone());
            }
        }
        let minus = PauliOperator::identity(code.n()).with_phase(2);
        prop_assert!(table.iter().all(|u| *u != minus));
        prop_assert_eq!(code.generator_matrix().rank(), code.n() - code.k());
    }

    #[test]
    fn twirl_identity((code, rho) in code(2..=4).prop_flat_map(|c| { let n = c.n(); (Just(c), common::density(n)) })) {
        let a = charge_measurement(&code, &rho).unwrap();
        let b = stabilizer_twirl(&code, &rho).unwrap();
        prop_assert!(dense::max_abs_diff(&a, &b) < TOL);
    }

    #[test]
    fn errors_map_code_space_onto_isotypes(code in code(2..=5)) {
        let pi = code_projector(&code).unwrap();
        let errors = build_maximal_error_set(&code, &[]).unwrap();
        let dim = (1u64 << code.k()) as f64;
        for (chi, e) in errors.iter().enumerate() {
            let p = isotype_projector(&code, &Character::from_index(code.m(), chi)).unwrap();
            let em = dense::pauli_matrix(e).unwrap();
            let img = &p * &em * &pi * em.adjoint() * &p;
            prop_assert!((dense::trace(&img) - c(dim, 0.0)).norm() < TOL);
            // E_χ Π E_χ† is the isotype projector itself.
            prop_assert!(dense::max_abs_diff(&(&em * &pi * em.adjoint()), &p) < TOL);
        }
    }

    #[test]
    fn group_average_is_idempotent((code, s) in code(2..=7).prop_flat_map(|c| { let n = c.n(); (Just(c), common::state(n)) })) {
        let once = apply_code_projector(&code, &s).unwrap();
        let twice = apply_code_projector(&code, &once).unwrap();
        prop_assert!(dense::max_abs_diff_state(&once, &twice) < TOL);
        for g in code.generators() {
            prop_assert!(dense::max_abs_diff_state(&dense::apply_pauli(g, &once).unwrap(), &once) < TOL);
        }
    }
}
