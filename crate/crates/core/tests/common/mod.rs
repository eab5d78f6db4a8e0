//! Strategies shared by the property tests.
#![allow(dead_code)]

use proptest::prelude::*;
use qrfcode_core::dense::{c, DenseOperator, DenseState};
use qrfcode_core::{build_code, Letter, PauliOperator, StabilizerCode};

pub const TOL: f64 = 1e-10;

pub fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::I), Just(Letter::X), Just(Letter::Y), Just(Letter::Z)]
}

pub fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (prop::collection::vec(letter(), n), 0u8..4).prop_map(|(ls, ph)| PauliOperator::from_letters(&ls, ph))
}

pub fn hermitian_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (prop::collection::vec(letter(), n), prop::bool::ANY)
        .prop_map(|(ls, neg)| PauliOperator::from_letters(&ls, if neg { 2 } else { 0 }))
}

/// Greedy code from candidate strings: keep each string that commutes with
/// the kept ones and is independent of them, up to `max_m` generators.
pub fn greedy_code(n: usize, candidates: &[PauliOperator], max_m: usize) -> Option<StabilizerCode> {
    let mut kept: Vec<PauliOperator> = Vec::new();
    for p in candidates {
        if kept.len() == max_m || p.is_identity_string() {
            continue;
        }
        if !kept.iter().all(|g| g.commutes(p).unwrap()) {
            continue;
        }
        let mut trial = kept.clone();
        trial.push(p.clone());
        if build_code(n, trial.clone()).is_ok() {
            kept = trial;
        }
    }
    if kept.is_empty() {
        return None;
    }
    build_code(n, kept).ok()
}

/// Random stabilizer codes with `n` in `ns` and `1 ≤ m < n`.
pub fn code(ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = StabilizerCode> {
    ns.prop_flat_map(|n| (Just(n), prop::collection::vec(hermitian_pauli(n), 6..16), 1..n))
        .prop_filter_map("no generators survived", |(n, cands, max_m)| greedy_code(n, &cands, max_m))
}

pub fn state(n: usize) -> impl Strategy<Value = DenseState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << n)
        .prop_filter("non-zero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| {
            let s = DenseState::from_iterator(v.len(), v.into_iter().map(|(a, b)| c(a, b)));
            let norm = s.norm();
            s / c(norm, 0.0)
        })
}

pub fn density(n: usize) -> impl Strategy<Value = DenseOperator> {
    (state(n), state(n), 0.0f64..1.0).prop_map(|(a, b, w)| {
        qrfcode_core::dense::outer(&a, &a) * c(w, 0.0) + qrfcode_core::dense::outer(&b, &b) * c(1.0 - w, 0.0)
    })
}
