//! Local reference frames on random codes.

mod common;

use common::{code, TOL};
use proptest::prelude::*;
use qrfcode_core::qrf_local::{frame_local_restricted_paulis, LocalFrame, SeedBasis};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cocycle_condition_and_reconstruction(code in code(2..=6)) {
        let frame = LocalFrame::new(&code, None, &SeedBasis::X).unwrap();
        let size = frame.order();
        for g in 0..size {
            for h in 0..size {
                for k in 0..size {
                    let lhs = (frame.cocycle(g, h ^ k) + frame.cocycle(h, k)) % 4;
                    let rhs = (frame.cocycle(g, h) + frame.cocycle(g ^ h, k)) % 4;
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
        prop_assert!(frame.reconstructs_group());
        prop_assert!(frame.orthonormality_deviation() < TOL);
    }

    #[test]
    fn no_frame_local_paulis_with_nontrivial_system_fragments(code in code(2..=4)) {
        let frame = LocalFrame::new(&code, None, &SeedBasis::X).unwrap();
        prop_assume!(frame.fragments_s().iter().any(|p| !p.is_identity_string()));
        prop_assert!(frame_local_restricted_paulis(&frame, TOL).unwrap().is_empty());
    }

    #[test]
    fn dual_errors_are_trivialized(code in code(2..=5)) {
        let frame = LocalFrame::new(&code, None, &SeedBasis::X).unwrap();
        prop_assert!(frame.trivialized_error_deviation().unwrap() < TOL);
    }
}
