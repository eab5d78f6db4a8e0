//! The group `Z₂^m`, its character group and the scalar Fourier transform.
//!
//! Elements and characters share the bit-vector encoding. The integer index
//! of an element has bit `i` equal to the exponent of generator `i`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Largest rank for which full tables are materialised.
pub const TABLE_CAP: usize = 16;

/// An element `g ∈ Z₂^m`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement(pub BitVec);

/// A character `χ_a(g) = (−1)^{a·g}` labelled by `a`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Character(pub BitVec);

macro_rules! label_impl {
    ($t:ty) => {
        impl $t {
            pub fn zero(m: usize) -> Self {
                Self(BitVec::zeros(m))
            }

            pub fn from_index(m: usize, index: usize) -> Self {
                Self(BitVec::from_u64(m, index as u64))
            }

            pub fn index(&self) -> usize {
                self.0.to_u64().expect("rank above 64") as usize
            }

            pub fn m(&self) -> usize {
                self.0.len()
            }

            pub fn bits(&self) -> &BitVec {
                &self.0
            }

            pub fn is_trivial(&self) -> bool {
                self.0.is_zero()
            }

            /// Group operation (bitwise xor).
            pub fn compose(&self, other: &Self) -> Self {
                Self(self.0.xor(&other.0))
            }

            /// Sign label with `-` for a set bit, e.g. `+-` for index 2 on m = 2.
            pub fn label(&self) -> String {
                (0..self.m()).map(|i| if self.0.get(i) { '-' } else { '+' }).collect()
            }

            pub fn from_label(label: &str) -> Result<Self> {
                let mut bits = Vec::with_capacity(label.len());
                for (offset, c) in label.char_indices() {
                    match c {
                        '+' => bits.push(false),
                        '-' => bits.push(true),
                        _ => return Err(Error::Parse { offset, message: format!("expected '+' or '-', got '{c}'") }),
                    }
                }
                Ok(Self(BitVec::from_bools(&bits)))
            }

            /// All `2^m` values in index order.
            pub fn all(m: usize) -> Vec<Self> {
                (0..1usize << m).map(|i| Self::from_index(m, i)).collect()
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.label())
            }
        }
    };
}

label_impl!(GroupElement);
label_impl!(Character);

/// Sign `χ(g) ∈ {+1, −1}`.
pub fn chi_eval(chi: &Character, g: &GroupElement) -> Result<i32> {
    if chi.m() != g.m() {
        return Err(Error::Dimension { expected: chi.m(), got: g.m() });
    }
    Ok(if chi.0.dot(&g.0) { -1 } else { 1 })
}

/// Sign `χ(g)` on integer indices.
#[inline]
pub fn chi_sign(chi: usize, g: usize) -> f64 {
    if (chi & g).count_ones() % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// A complex function on `Z₂^m`, stored in index order.
#[derive(Clone, PartialEq, Debug)]
pub struct GroupFunction {
    m: usize,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(m: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != 1usize << m {
            return Err(Error::Dimension { expected: 1 << m, got: values.len() });
        }
        Ok(GroupFunction { m, values })
    }

    pub fn delta(m: usize, at: usize) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); 1 << m];
        values[at] = Complex64::new(1.0, 0.0);
        GroupFunction { m, values }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// `F[f](χ) = 2^{-m/2} Σ_g f(g) χ(g)`, evaluated as a fast Walsh–Hadamard transform.
pub fn fourier(f: &GroupFunction) -> GroupFunction {
    let mut v = f.values.clone();
    let mut h = 1;
    while h < v.len() {
        for block in (0..v.len()).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
    let scale = (v.len() as f64).sqrt().recip();
    for x in &mut v {
        *x *= scale;
    }
    GroupFunction { m: f.m, values: v }
}

/// Inverse transform; the transform is its own inverse on `Z₂^m`.
pub fn fourier_inverse(f: &GroupFunction) -> GroupFunction {
    fourier(f)
}

/// Matrix `T[χ][η] = Σ_g χ(g) η(g)`, which equals `2^m δ_{χη}`; returned
/// divided by `2^m` as exact integers.
pub fn character_orthogonality_table(m: usize) -> Result<Vec<Vec<i64>>> {
    if m > TABLE_CAP {
        return Err(Error::CapExceeded { n: m, cap: TABLE_CAP });
    }
    let size = 1usize << m;
    let mut table = vec![vec![0i64; size]; size];
    for (chi, row) in table.iter_mut().enumerate() {
        for (eta, entry) in row.iter_mut().enumerate() {
            let sum: i64 = (0..size).map(|g| if ((chi ^ eta) & g).count_ones() % 2 == 1 { -1 } else { 1 }).sum();
            *entry = sum / size as i64;
        }
    }
    Ok(table)
}

/// Matrix `Σ_χ χ(g) χ(h)` over pairs of group elements (not normalised).
pub fn dual_orthogonality_table(m: usize) -> Result<Vec<Vec<i64>>> {
    if m > TABLE_CAP {
        return Err(Error::CapExceeded { n: m, cap: TABLE_CAP });
    }
    let size = 1usize << m;
    Ok((0..size)
        .map(|g| {
            (0..size)
                .map(|h| (0..size).map(|chi| if (chi & (g ^ h)).count_ones() % 2 == 1 { -1 } else { 1 }).sum())
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_character_is_one() {
        for g in GroupElement::all(3) {
            assert_eq!(chi_eval(&Character::zero(3), &g).unwrap(), 1);
        }
    }

    #[test]
    fn labels_round_trip() {
        let g = GroupElement::from_label("-+").unwrap();
        assert_eq!(g.index(), 1);
        assert_eq!(g.label(), "-+");
        assert!(GroupElement::from_label("+x").is_err());
    }

    #[test]
    fn nontrivial_character_sums_to_zero() {
        for chi in Character::all(2).into_iter().skip(1) {
            let s: i32 = GroupElement::all(2).iter().map(|g| chi_eval(&chi, g).unwrap()).sum();
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn delta_transforms_to_uniform_and_back() {
        let f = fourier(&GroupFunction::delta(3, 0));
        for v in f.values() {
            assert!((v - Complex64::new(8f64.sqrt().recip(), 0.0)).norm() < 1e-15);
        }
        let back = fourier(&f);
        assert!((back.values()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(back.values()[1..].iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn orthogonality_tables_are_identities() {
        for m in 1..=3 {
            let t = character_orthogonality_table(m).unwrap();
            for (i, row) in t.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    assert_eq!(v, (i == j) as i64);
                }
            }
        }
        let d = dual_orthogonality_table(3).unwrap();
        assert_eq!(d[2][2], 8);
        assert_eq!(d[2][5], 0);
        assert!(character_orthogonality_table(17).is_err());
    }
}
