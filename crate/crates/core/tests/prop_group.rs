//! Characters of Z₂^m and Fourier transforms.

use proptest::prelude::*;
use qrfcode_core::dense::c;
use qrfcode_core::group::{
    character_orthogonality_table, chi_eval, dual_orthogonality_table, fourier, fourier_inverse, Character,
    GroupElement, GroupFunction,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn characters_are_multiplicative((m, chi, g, h) in (1usize..=10).prop_flat_map(|m| (Just(m), 0..1usize << m, 0..1usize << m, 0..1usize << m))) {
        let chi = Character::from_index(m, chi);
        let (g, h) = (GroupElement::from_index(m, g), GroupElement::from_index(m, h));
        let gh = g.compose(&h);
        prop_assert_eq!(chi_eval(&chi, &gh).unwrap(), chi_eval(&chi, &g).unwrap() * chi_eval(&chi, &h).unwrap());
    }

    #[test]
    fn evaluation_maps_are_the_double_dual((m, g, chi) in (1usize..=10).prop_flat_map(|m| (Just(m), 0..1usize << m, 0..1usize << m))) {
        // ev_g(χ) = χ(g): reading the table along the other axis gives the same values.
        let ev = Character::from_index(m, g);
        let as_group = GroupElement::from_index(m, chi);
        let forward = chi_eval(&Character::from_index(m, chi), &GroupElement::from_index(m, g)).unwrap();
        prop_assert_eq!(chi_eval(&ev, &as_group).unwrap(), forward);
    }

    #[test]
    fn fourier_round_trip((m, values) in (0usize..=6).prop_flat_map(|m| (Just(m), prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << m)))) {
        let f = GroupFunction::new(m, values.iter().map(|&(a, b)| c(a, b)).collect()).unwrap();
        let back = fourier_inverse(&fourier(&f));
        for (x, y) in back.values().iter().zip(f.values()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
        prop_assert!((fourier(&f).norm_sqr() - f.norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn orthogonality_tables_are_diagonal() {
    for m in 0..=5 {
        let size = 1i64 << m;
        // The character table is normalised by 2^m; the dual table is not.
        let tables = [(character_orthogonality_table(m).unwrap(), 1), (dual_orthogonality_table(m).unwrap(), size)];
        for (table, diag) in tables {
            for (i, row) in table.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    assert_eq!(v, if i == j { diag } else { 0 });
                }
            }
        }
    }
}
