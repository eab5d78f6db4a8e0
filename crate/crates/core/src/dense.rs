//! Brute-force state-vector oracle.
//!
//! Basis index bit `n − 1 − q` holds qubit `q` (0-based), so qubit 1 in text
//! is the most significant bit and `|100⟩` has index 4. Full matrices are
//! built only up to [`MATRIX_CAP`] qubits; state action goes up to
//! [`STATE_CAP`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{all_strings_by_key, PauliOperator};

pub type C64 = Complex64;
pub type DenseState = DVector<C64>;
pub type DenseOperator = DMatrix<C64>;

/// Largest qubit count for full operator matrices.
pub const MATRIX_CAP: usize = 6;
/// Largest qubit count for state-vector action.
pub const STATE_CAP: usize = 13;
/// Eigenvalue window used by [`projector_rank`].
pub const RANK_TOL: f64 = 1e-8;
/// Largest dimension handled by a full eigendecomposition in [`projector_rank`].
pub const EIGEN_DIM_CAP: usize = 64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `i^k`.
#[inline]
pub fn i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

pub fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

/// Qubit count of a `2^n`-dimensional space.
pub fn num_qubits(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() {
        return Err(Error::Invalid(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

pub fn zero_state(n: usize) -> DenseState {
    DenseState::zeros(1 << n)
}

pub fn basis_state(n: usize, index: usize) -> DenseState {
    let mut s = zero_state(n);
    s[index] = c(1.0, 0.0);
    s
}

/// Basis state from a bit string such as `"100"`.
pub fn ket(bits: &str) -> DenseState {
    let index = bits.chars().fold(0usize, |acc, ch| (acc << 1) | (ch == '1') as usize);
    basis_state(bits.len(), index)
}

/// `(x_mask, z_mask)` of a Pauli in basis-index bit order.
pub fn pauli_masks(p: &PauliOperator) -> (usize, usize) {
    let n = p.n();
    let (mut xm, mut zm) = (0usize, 0usize);
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        if p.x().get(q) {
            xm |= bit;
        }
        if p.z().get(q) {
            zm |= bit;
        }
    }
    (xm, zm)
}

/// `P|b⟩ = i^{phase + #Y} (−1)^{z·b} |b ⊕ x⟩`.
pub fn apply_pauli(p: &PauliOperator, s: &DenseState) -> Result<DenseState> {
    let n = p.n();
    if s.len() != 1 << n {
        return Err(Error::Dimension { expected: 1 << n, got: s.len() });
    }
    let (xm, zm) = pauli_masks(p);
    let base = i_pow(p.phase_exp() as usize + p.y_count());
    let mut out = DenseState::zeros(s.len());
    for (b, amp) in s.iter().enumerate() {
        let sign = if (zm & b).count_ones() % 2 == 1 { -base } else { base };
        out[b ^ xm] = sign * amp;
    }
    Ok(out)
}

/// Applies `P` to every column of `m`.
pub fn apply_pauli_left(p: &PauliOperator, m: &DenseOperator) -> Result<DenseOperator> {
    let mut out = DenseOperator::zeros(m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        out.set_column(j, &apply_pauli(p, &m.column(j).into_owned())?);
    }
    Ok(out)
}

pub fn pauli_matrix(p: &PauliOperator) -> Result<DenseOperator> {
    let n = p.n();
    check_cap(n, MATRIX_CAP)?;
    let (xm, zm) = pauli_masks(p);
    let base = i_pow(p.phase_exp() as usize + p.y_count());
    let mut m = DenseOperator::zeros(1 << n, 1 << n);
    for b in 0..1usize << n {
        m[(b ^ xm, b)] = if (zm & b).count_ones() % 2 == 1 { -base } else { base };
    }
    Ok(m)
}

/// `Σ c_j P_j`.
pub fn operator_from_paulis(n: usize, terms: &[(C64, PauliOperator)]) -> Result<DenseOperator> {
    check_cap(n, MATRIX_CAP)?;
    let mut m = DenseOperator::zeros(1 << n, 1 << n);
    for (coef, p) in terms {
        if p.n() != n {
            return Err(Error::Dimension { expected: n, got: p.n() });
        }
        m += pauli_matrix(p)? * *coef;
    }
    Ok(m)
}

/// Parses `(coefficient, pauli-text)` pairs into a dense operator.
pub fn operator_from_text(terms: &[(C64, &str)]) -> Result<DenseOperator> {
    let parsed =
        terms.iter().map(|(coef, text)| Ok((*coef, text.parse::<PauliOperator>()?))).collect::<Result<Vec<_>>>()?;
    let n = parsed.first().map_or(0, |(_, p)| p.n());
    operator_from_paulis(n, &parsed)
}

pub fn trace(op: &DenseOperator) -> C64 {
    op.trace()
}

/// `⟨a|b⟩`, antilinear in `a`.
pub fn inner_product(a: &DenseState, b: &DenseState) -> C64 {
    a.dotc(b)
}

/// `|a⟩⟨b|`.
pub fn outer(a: &DenseState, b: &DenseState) -> DenseOperator {
    a * b.adjoint()
}

pub fn max_abs_diff(a: &DenseOperator, b: &DenseOperator) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff_state(a: &DenseState, b: &DenseState) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entry of `U†U − I`.
pub fn unitarity_deviation(u: &DenseOperator) -> f64 {
    let id = DenseOperator::identity(u.nrows(), u.ncols());
    max_abs_diff(&(u.adjoint() * u), &id)
}

/// Number of eigenvalues within [`RANK_TOL`] of 1 for a Hermitian operator.
///
/// Above [`EIGEN_DIM_CAP`] the operator is assumed to be a projector and its
/// rank is read off a Gram–Schmidt pass over its columns instead.
pub fn projector_rank(op: &DenseOperator) -> usize {
    if op.nrows() <= EIGEN_DIM_CAP {
        let eig = op.clone().symmetric_eigen();
        return eig.eigenvalues.iter().filter(|&&v| (v - 1.0).abs() < RANK_TOL).count();
    }
    let columns: Vec<DenseState> = (0..op.ncols()).map(|j| op.column(j).into_owned()).collect();
    span_rank(&columns, RANK_TOL)
}

/// Dimension of the span of `vectors`, by modified Gram–Schmidt.
pub fn span_rank(vectors: &[DenseState], tol: f64) -> usize {
    orthonormal_basis(vectors, tol).len()
}

/// Orthonormal basis of the span of `vectors`, in input order.
pub fn orthonormal_basis(vectors: &[DenseState], tol: f64) -> Vec<DenseState> {
    let mut basis: Vec<DenseState> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&w);
                w -= b * proj;
            }
        }
        let norm = w.norm();
        if norm > tol {
            basis.push(w / c(norm, 0.0));
        }
    }
    basis
}

/// Coefficients `tr(P† A) / 2^n` for every Pauli string with magnitude above `tol`.
pub fn pauli_coefficients(op: &DenseOperator, tol: f64) -> Result<Vec<(C64, PauliOperator)>> {
    let n = num_qubits(op.nrows())?;
    check_cap(n, MATRIX_CAP)?;
    let dim = 1usize << n;
    let mut out = Vec::new();
    for p in all_strings_by_key(n) {
        let (xm, zm) = pauli_masks(&p);
        let base = i_pow(p.y_count());
        let mut acc = c(0.0, 0.0);
        for b in 0..dim {
            let entry = if (zm & b).count_ones() % 2 == 1 { -base } else { base };
            acc += entry.conj() * op[(b ^ xm, b)];
        }
        acc /= dim as f64;
        if acc.norm() > tol {
            out.push((acc, p));
        }
    }
    Ok(out)
}

/// The Pauli operator equal to `op` within `tol`, if any.
pub fn as_pauli(op: &DenseOperator, tol: f64) -> Option<PauliOperator> {
    let terms = pauli_coefficients(op, tol).ok()?;
    let [(coef, p)] = terms.as_slice() else {
        return None;
    };
    let phase = (0..4).find(|&k| (i_pow(k) - coef).norm() < tol)?;
    let candidate = p.with_phase(phase as u8);
    let m = pauli_matrix(&candidate).ok()?;
    (max_abs_diff(&m, op) < tol).then_some(candidate)
}

/// Index of the sub-register `qubits` (0-based, in the given order) inside
/// the full basis index `index` on `n` qubits.
#[inline]
pub fn sub_index(index: usize, n: usize, qubits: &[usize]) -> usize {
    qubits.iter().fold(0usize, |acc, &q| (acc << 1) | ((index >> (n - 1 - q)) & 1))
}

/// Full index from sub-register values.
#[inline]
pub fn scatter_index(n: usize, parts: &[(usize, &[usize])]) -> usize {
    let mut index = 0usize;
    for &(value, qubits) in parts {
        let m = qubits.len();
        for (pos, &q) in qubits.iter().enumerate() {
            if (value >> (m - 1 - pos)) & 1 == 1 {
                index |= 1 << (n - 1 - q);
            }
        }
    }
    index
}

/// Tensor product of operators acting on disjoint qubit lists, identity
/// elsewhere, in the natural ordering of `n` qubits.
pub fn embed(n: usize, parts: &[(&DenseOperator, &[usize])]) -> Result<DenseOperator> {
    check_cap(n, MATRIX_CAP)?;
    for (op, qubits) in parts {
        if op.nrows() != 1 << qubits.len() {
            return Err(Error::Dimension { expected: 1 << qubits.len(), got: op.nrows() });
        }
    }
    let covered: Vec<usize> = parts.iter().flat_map(|(_, q)| q.iter().copied()).collect();
    let rest: Vec<usize> = (0..n).filter(|q| !covered.contains(q)).collect();
    let dim = 1usize << n;
    let mut m = DenseOperator::zeros(dim, dim);
    for row in 0..dim {
        for col in 0..dim {
            if sub_index(row, n, &rest) != sub_index(col, n, &rest) {
                continue;
            }
            let mut v = c(1.0, 0.0);
            for (op, qubits) in parts {
                v *= op[(sub_index(row, n, qubits), sub_index(col, n, qubits))];
                if v == c(0.0, 0.0) {
                    break;
                }
            }
            m[(row, col)] = v;
        }
    }
    Ok(m)
}

/// Product state of states on disjoint qubit lists covering all `n` qubits.
pub fn kron_state(n: usize, parts: &[(&DenseState, &[usize])]) -> Result<DenseState> {
    let total: usize = parts.iter().map(|(_, q)| q.len()).sum();
    if total != n {
        return Err(Error::Dimension { expected: n, got: total });
    }
    let mut out = zero_state(n);
    for (index, amp) in out.iter_mut().enumerate() {
        let mut v = c(1.0, 0.0);
        for (s, qubits) in parts {
            v *= s[sub_index(index, n, qubits)];
        }
        *amp = v;
    }
    Ok(out)
}

/// `(⟨bra|_R ⊗ I)|state⟩` with `R = bra_qubits`; the result lives on the
/// complementary qubits in ascending order.
pub fn contract_bra(bra: &DenseState, bra_qubits: &[usize], state: &DenseState) -> Result<DenseState> {
    let n = num_qubits(state.len())?;
    if bra.len() != 1 << bra_qubits.len() {
        return Err(Error::Dimension { expected: 1 << bra_qubits.len(), got: bra.len() });
    }
    let rest: Vec<usize> = (0..n).filter(|q| !bra_qubits.contains(q)).collect();
    let mut out = zero_state(rest.len());
    for (index, amp) in state.iter().enumerate() {
        out[sub_index(index, n, &rest)] += bra[sub_index(index, n, bra_qubits)].conj() * amp;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn x_flips_first_qubit() {
        let out = apply_pauli(&p("XII"), &ket("000")).unwrap();
        assert_eq!(out, ket("100"));
    }

    #[test]
    fn y_on_zero_is_i_one() {
        let out = apply_pauli(&p("Y"), &ket("0")).unwrap();
        assert_eq!(out, ket("1") * c(0.0, 1.0));
    }

    #[test]
    fn ghz_is_stabilised_by_zz() {
        let s = (ket("000") + ket("111")) / c(2f64.sqrt(), 0.0);
        assert!(max_abs_diff_state(&apply_pauli(&p("ZZI"), &s).unwrap(), &s) < 1e-15);
    }

    #[test]
    fn pauli_matrix_matches_hand_written_y() {
        let y = pauli_matrix(&p("Y")).unwrap();
        let expected = DenseOperator::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert_eq!(y, expected);
    }

    #[test]
    fn as_pauli_recognises_and_rejects() {
        let m = pauli_matrix(&p("-iXZY")).unwrap();
        assert_eq!(as_pauli(&m, 1e-12).unwrap().to_string(), "-iXZY");
        let sum = operator_from_text(&[(c(1.0, 0.0), "XI"), (c(1.0, 0.0), "IX")]).unwrap();
        assert!(as_pauli(&sum, 1e-12).is_none());
    }

    #[test]
    fn projector_rank_of_diagonal_projector() {
        let mut m = DenseOperator::zeros(4, 4);
        m[(0, 0)] = c(1.0, 0.0);
        m[(3, 3)] = c(1.0, 0.0);
        assert_eq!(projector_rank(&m), 2);
    }

    #[test]
    fn embed_places_factors_on_named_qubits() {
        let x = pauli_matrix(&p("X")).unwrap();
        let z = pauli_matrix(&p("Z")).unwrap();
        let e = embed(3, &[(&x, &[2]), (&z, &[0])]).unwrap();
        assert!(max_abs_diff(&e, &pauli_matrix(&p("ZIX")).unwrap()) < 1e-15);
    }

    #[test]
    fn contract_bra_conditions_on_register() {
        let s = (ket("010") + ket("111")) / c(2f64.sqrt(), 0.0);
        let out = contract_bra(&ket("1"), &[1], &s).unwrap();
        let expected = (ket("00") + ket("11")) / c(2f64.sqrt(), 0.0);
        assert!(max_abs_diff_state(&out, &expected) < 1e-15);
    }
}
