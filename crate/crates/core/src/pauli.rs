//! Phase-tracked Pauli strings in symplectic form.
//!
//! An operator is `i^phase · P_1 ⊗ … ⊗ P_n` with each `P_q` one of the
//! Hermitian letters `I, X, Y, Z`, stored as the bit pair `(x_q, z_q)` with
//! `Y = (1, 1)`. Text indices are 1-based; storage is 0-based.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// A single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// Exponent `k` with `a · b = i^k (a ⊕ b)` for Hermitian single-qubit letters.
#[inline]
fn letter_product_phase(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

/// An n-qubit Pauli operator with an overall phase `i^phase_exp`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator { x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 }
    }

    pub fn from_xz(x: BitVec, z: BitVec, phase_exp: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::Dimension { expected: x.len(), got: z.len() });
        }
        Ok(PauliOperator { x, z, phase: phase_exp % 4 })
    }

    pub fn from_letters(letters: &[Letter], phase_exp: u8) -> Self {
        let n = letters.len();
        let mut p = PauliOperator::identity(n);
        for (q, l) in letters.iter().enumerate() {
            p.set_letter(q, *l);
        }
        p.phase = phase_exp % 4;
        p
    }

    /// Operator with the given letters at 1-based positions and `I` elsewhere.
    pub fn from_sparse(n: usize, terms: &[(usize, Letter)]) -> Result<Self> {
        let mut p = PauliOperator::identity(n);
        for &(idx, l) in terms {
            if idx == 0 || idx > n {
                return Err(Error::IndexOutOfRange { index: idx, n });
            }
            p.set_letter(idx - 1, l);
        }
        Ok(p)
    }

    /// Parses text and checks that the string has `n` letters.
    pub fn parse_n(text: &str, n: usize) -> Result<Self> {
        let p: PauliOperator = text.parse()?;
        if p.n() != n {
            return Err(Error::Dimension { expected: n, got: p.n() });
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(&self, phase_exp: u8) -> Self {
        PauliOperator { phase: phase_exp % 4, ..self.clone() }
    }

    /// Multiplies the operator by `i^k`.
    pub fn times_i_pow(&self, k: u8) -> Self {
        self.with_phase(self.phase + k % 4)
    }

    /// 0-based letter access.
    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set_letter(&mut self, q: usize, l: Letter) {
        let (x, z) = l.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n()).map(|q| self.letter(q)).collect()
    }

    /// Letters without the phase prefix.
    pub fn string(&self) -> String {
        (0..self.n()).map(|q| self.letter(q).as_char()).collect()
    }

    pub fn is_identity_string(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// The identity operator with phase +1.
    pub fn is_identity(&self) -> bool {
        self.is_identity_string() && self.phase == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    pub fn weight(&self) -> usize {
        self.x.or(&self.z).count_ones()
    }

    /// 0-based indices of non-identity letters.
    pub fn support(&self) -> Vec<usize> {
        self.x.or(&self.z).ones().collect()
    }

    /// Number of `Y` letters.
    pub fn y_count(&self) -> usize {
        self.x.and(&self.z).count_ones()
    }

    pub fn dagger(&self) -> Self {
        self.with_phase((4 - self.phase) % 4)
    }

    /// Same letters with phase +1.
    pub fn unsigned(&self) -> Self {
        self.with_phase(0)
    }

    /// Symplectic vector `(x | z)` of length `2n`.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// Inverse of [`PauliOperator::symplectic`], with phase +1.
    pub fn from_symplectic(v: &BitVec) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::Invalid(format!("symplectic vector of odd length {}", v.len())));
        }
        let n = v.len() / 2;
        let x = v.select(&(0..n).collect::<Vec<_>>());
        let z = v.select(&(n..2 * n).collect::<Vec<_>>());
        PauliOperator::from_xz(x, z, 0)
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_len(other)?;
        let mut phase = self.phase as i32 + other.phase as i32;
        for q in 0..self.n() {
            phase += letter_product_phase(self.x.get(q), self.z.get(q), other.x.get(q), other.z.get(q));
        }
        Ok(PauliOperator { x: self.x.xor(&other.x), z: self.z.xor(&other.z), phase: phase.rem_euclid(4) as u8 })
    }

    /// Whether the symplectic form vanishes.
    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.x.dot(&other.z) == self.z.dot(&other.x))
    }

    /// Sets the letters at the 1-based positions in `drop_set` to `I` and
    /// resets the phase to +1.
    pub fn truncate(&self, drop_set: &[usize]) -> Result<PauliOperator> {
        let n = self.n();
        let mut out = self.unsigned();
        for &idx in drop_set {
            if idx == 0 || idx > n {
                return Err(Error::IndexOutOfRange { index: idx, n });
            }
            out.set_letter(idx - 1, Letter::I);
        }
        Ok(out)
    }

    /// Operator on the 0-based qubits `keep` (in that order), with phase +1.
    pub fn restrict(&self, keep: &[usize]) -> PauliOperator {
        PauliOperator { x: self.x.select(keep), z: self.z.select(keep), phase: 0 }
    }

    /// Tensor product `self ⊗ other`, phases multiplied.
    pub fn tensor(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator { x: self.x.concat(&other.x), z: self.z.concat(&other.z), phase: (self.phase + other.phase) % 4 }
    }

    /// Ordering used for deterministic searches: weight, then support
    /// indices, then letters with `I < X < Y < Z`, then phase.
    pub fn search_key_cmp(&self, other: &PauliOperator) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.support().cmp(&other.support()))
            .then_with(|| self.letters().cmp(&other.letters()))
            .then_with(|| self.phase.cmp(&other.phase))
    }

    fn check_len(&self, other: &PauliOperator) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Dimension { expected: self.n(), got: other.n() });
        }
        Ok(())
    }
}

/// Every Pauli string on `n` qubits with phase +1, in the order of
/// [`PauliOperator::search_key_cmp`].
pub fn all_strings_by_key(n: usize) -> Vec<PauliOperator> {
    let mut out = Vec::with_capacity(1usize << (2 * n));
    for w in 0..=n {
        for support in itertools::Itertools::combinations(0..n, w) {
            for code in 0..3usize.pow(w as u32) {
                let mut p = PauliOperator::identity(n);
                let mut rest = code;
                // Last support position varies fastest.
                for &q in support.iter().rev() {
                    p.set_letter(q, [Letter::X, Letter::Y, Letter::Z][rest % 3]);
                    rest /= 3;
                }
                out.push(p);
            }
        }
    }
    out
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.string())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (phase, rest, offset) = if let Some(r) = text.strip_prefix("+i") {
            (1, r, 2)
        } else if let Some(r) = text.strip_prefix("-i") {
            (3, r, 2)
        } else if let Some(r) = text.strip_prefix('+') {
            (0, r, 1)
        } else if let Some(r) = text.strip_prefix('-') {
            (2, r, 1)
        } else {
            (0, text, 0)
        };
        let mut letters = Vec::with_capacity(rest.len());
        for (i, c) in rest.char_indices() {
            match Letter::from_char(c) {
                Some(l) => letters.push(l),
                None => {
                    return Err(Error::Parse {
                        offset: offset + i,
                        message: format!("unexpected character '{c}', expected one of I X Y Z"),
                    })
                }
            }
        }
        Ok(PauliOperator::from_letters(&letters, phase))
    }
}

impl serde::Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
