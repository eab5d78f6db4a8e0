//! Surface-code invariants on random lattices, paths and deformations.

use proptest::prelude::*;
use qrfcode_core::dense;
use qrfcode_core::stabilizer::codewords;
use qrfcode_core::surface::{
    boundary_composition, build_rect_lattice, build_torus, coboundary_composition, homotopy_canonical,
    spanning_forests, string_operator, vertex_plaquette_code, CombinatorialMap, StringKind,
};

fn lattice() -> impl Strategy<Value = CombinatorialMap> {
    prop_oneof![
        (1usize..=4, 1usize..=4).prop_map(|(l, h)| build_rect_lattice(l, h).unwrap()),
        (2usize..=4, 2usize..=4).prop_map(|(a, b)| build_torus(a, b).unwrap()),
    ]
}

fn subset(len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(any::<bool>(), len)
        .prop_map(|bits| bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect())
}

fn xor_edges(path: &[usize], face: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = path.iter().copied().filter(|e| !face.contains(e)).collect();
    out.extend(face.iter().copied().filter(|e| !path.contains(e)));
    out.sort_unstable();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundary_of_boundary_vanishes(map in lattice()) {
        prop_assert!(boundary_composition(&map).rows().iter().all(|r| r.is_zero()));
        prop_assert!(coboundary_composition(&map).rows().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn anticommutation_is_intersection_parity((map, t, tp) in lattice().prop_flat_map(|m| { let e = m.num_edges(); (Just(m), subset(e), subset(e)) })) {
        let z = string_operator(&map, &t, StringKind::Z).unwrap();
        let x = string_operator(&map, &tp, StringKind::X).unwrap();
        let overlap = t.iter().filter(|e| tp.contains(e)).count();
        prop_assert_eq!(z.commutes(&x).unwrap(), overlap % 2 == 0);
    }

    #[test]
    fn plaquette_deformations_keep_the_homotopy_class(
        (map, t, f) in lattice().prop_flat_map(|m| { let (e, nf) = (m.num_edges(), m.num_faces()); (Just(m), subset(e), 0..nf) })
    ) {
        let deformed = xor_edges(&t, map.face(f));
        prop_assert_eq!(
            homotopy_canonical(&map, &t, StringKind::Z).unwrap(),
            homotopy_canonical(&map, &deformed, StringKind::Z).unwrap()
        );
        let v = f % map.num_vertices();
        let star = map.vertex_star(v);
        prop_assert_eq!(
            homotopy_canonical(&map, &t, StringKind::X).unwrap(),
            homotopy_canonical(&map, &xor_edges(&t, &star), StringKind::X).unwrap()
        );
    }

    #[test]
    fn closed_kernel_has_four_elements((a, b) in (2usize..=4, 2usize..=4)) {
        let map = build_torus(a, b).unwrap();
        let s = vertex_plaquette_code(&map).unwrap();
        let (nv, nf) = (map.num_vertices(), map.num_faces());
        let mut ker = s.kernel_elements();
        ker.sort();
        let all_v: Vec<usize> = (0..nv).collect();
        let all_f: Vec<usize> = (0..nf).collect();
        let mut expected = vec![(vec![], vec![]), (vec![], all_f.clone()), (all_v.clone(), vec![]), (all_v, all_f)];
        expected.sort();
        prop_assert_eq!(ker, expected);
        prop_assert_eq!(s.quotient_rank(), nv + nf - 2);
        prop_assert_eq!(spanning_forests(&map).unwrap().leftover().len(), 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Dense check on codewords: `S^Z(t) Π` and `S^Z(t ⊕ ∂f) Π` agree.
    #[test]
    fn deformed_strings_act_identically_on_codewords(
        (l, h, t, f) in (1usize..=2, 1usize..=2).prop_flat_map(|(l, h)| {
            let e = 2 * l * h + l + h + 1;
            (Just(l), Just(h), subset(e), 0..l * (h + 1))
        })
    ) {
        let map = build_rect_lattice(l, h).unwrap();
        let s = vertex_plaquette_code(&map).unwrap();
        let a = string_operator(&map, &t, StringKind::Z).unwrap();
        let b = string_operator(&map, &xor_edges(&t, map.face(f)), StringKind::Z).unwrap();
        for w in codewords(s.code()).unwrap() {
            let d = dense::max_abs_diff_state(&dense::apply_pauli(&a, &w).unwrap(), &dense::apply_pauli(&b, &w).unwrap());
            prop_assert!(d < 1e-10);
        }
    }
}
