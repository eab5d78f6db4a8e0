//! Pauli algebra against its dense matrices.

mod common;

use common::pauli;
use proptest::prelude::*;
use qrfcode_core::dense;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_differ_by_sign_iff_anticommuting((a, b) in (1usize..=16).prop_flat_map(|n| (pauli(n), pauli(n)))) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        prop_assert_eq!(ab.string(), ba.string());
        let shift = (ab.phase_exp() + 4 - ba.phase_exp()) % 4;
        prop_assert!(shift == 0 || shift == 2);
        prop_assert_eq!(a.commutes(&b).unwrap(), shift == 0);
    }

    #[test]
    fn multiplication_is_associative((a, b, c) in (1usize..=16).prop_flat_map(|n| (pauli(n), pauli(n), pauli(n)))) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn product_matrix_is_matrix_product((a, b) in (1usize..=4).prop_flat_map(|n| (pauli(n), pauli(n)))) {
        let lhs = dense::pauli_matrix(&a.multiply(&b).unwrap()).unwrap();
        let rhs = dense::pauli_matrix(&a).unwrap() * dense::pauli_matrix(&b).unwrap();
        prop_assert_eq!(dense::max_abs_diff(&lhs, &rhs), 0.0);
    }

    #[test]
    fn action_composes((a, b, s) in (1usize..=6).prop_flat_map(|n| (pauli(n), pauli(n), common::state(n)))) {
        let lhs = dense::apply_pauli(&a.multiply(&b).unwrap(), &s).unwrap();
        let rhs = dense::apply_pauli(&a, &dense::apply_pauli(&b, &s).unwrap()).unwrap();
        prop_assert!(dense::max_abs_diff_state(&lhs, &rhs) < common::TOL);
    }

    #[test]
    fn text_round_trip(p in (1usize..=12).prop_flat_map(pauli)) {
        let back: qrfcode_core::PauliOperator = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn associativity_exhaustive_on_two_qubits() {
    let all: Vec<_> = (0u8..4)
        .flat_map(|ph| qrfcode_core::pauli::all_strings_by_key(2).into_iter().map(move |p| p.with_phase(ph)))
        .collect();
    for a in &all {
        for b in &all {
            for c in &all {
                let l = a.multiply(b).unwrap().multiply(c).unwrap();
                let r = a.multiply(&b.multiply(c).unwrap()).unwrap();
                assert_eq!(l, r);
            }
        }
    }
}
