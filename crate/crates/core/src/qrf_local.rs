//! Local reference frames carried by a subset of the physical qubits.
//!
//! A frame keeps `m = n − k` qubits `R` and splits every stabilizer as
//! `U^g = U_R^g ⊗ U_S^g`. The frame fragment `U_R^g` has phase +1 and the
//! system fragment keeps the phase of `U^g`. Orientation states are
//! `|g⟩ = U_R^g |e⟩` for a seed `|e⟩`. Qubit indices in this API are 1-based.

use std::collections::HashSet;

use itertools::Itertools;

use crate::dense::{self, c, DenseOperator, DenseState, C64};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::group::{chi_sign, GroupElement};
use crate::pauli::{all_strings_by_key, Letter, PauliOperator};
use crate::stabilizer::{self, StabilizerCode};

/// Largest frame size for the product-state seed search.
pub const PRODUCT_SEED_MAX_M: usize = 8;
/// Node budget for the commuting-subgroup seed search.
pub const SUBGROUP_SEARCH_BUDGET: usize = 200_000;
/// Tolerance for seed validation and orthonormality.
pub const FRAME_TOL: f64 = 1e-10;
/// Code-space residual accepted by the reduction maps.
pub const CODE_SPACE_TOL: f64 = 1e-8;

/// Preferred letter for product seeds, or an explicit seed.
#[derive(Clone, Debug, PartialEq)]
pub enum SeedBasis {
    X,
    Y,
    Custom(DenseState),
}

/// Which qubits are dropped (`A`) and which carry the frame; both 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameSelection {
    pub drop_set: Vec<usize>,
    pub frame: Vec<usize>,
}

/// Picks the lexicographically smallest faithful drop set, or validates `override_drop`.
pub fn select_frame_qubits(code: &StabilizerCode, override_drop: Option<&[usize]>) -> Result<FrameSelection> {
    let n = code.n();
    let k = code.k();
    let make = |drop: Vec<usize>| {
        let frame = (1..=n).filter(|q| !drop.contains(q)).collect();
        FrameSelection { drop_set: drop, frame }
    };
    if let Some(drop) = override_drop {
        let mut drop = drop.to_vec();
        drop.sort_unstable();
        drop.dedup();
        if let Some(&bad) = drop.iter().find(|&&q| q == 0 || q > n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        if drop.len() != k {
            return Err(Error::Invalid(format!("drop set must have {k} qubits, got {}", drop.len())));
        }
        let sel = make(drop);
        if let Some(g) = unfaithful_witness(code, &sel.frame) {
            return Err(Error::Unfaithful(g.label()));
        }
        return Ok(sel);
    }
    for drop in (1..=n).combinations(k) {
        let sel = make(drop);
        if unfaithful_witness(code, &sel.frame).is_none() {
            return Ok(sel);
        }
    }
    Err(Error::Unfaithful("no faithful drop set exists".into()))
}

/// Drop set complementary to the given 1-based frame qubits.
pub fn drop_set_for_frame(n: usize, frame: &[usize]) -> Vec<usize> {
    (1..=n).filter(|q| !frame.contains(q)).collect()
}

/// A non-identity `g` whose frame fragment is trivial, if any.
fn unfaithful_witness(code: &StabilizerCode, frame: &[usize]) -> Option<GroupElement> {
    let keep: Vec<usize> = frame.iter().map(|q| q - 1).collect();
    let rows: Vec<BitVec> = code.generators().iter().map(|g| g.restrict(&keep).symplectic()).collect();
    let m = BitMatrix::from_rows(2 * keep.len(), rows).ok()?;
    m.transpose().kernel().into_iter().next().map(GroupElement)
}

/// `(U_R^g, U_S^g)` for every `g` in index order; `frame0` is 0-based.
pub fn split_fragments(code: &StabilizerCode, frame0: &[usize]) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
    let system0: Vec<usize> = (0..code.n()).filter(|q| !frame0.contains(q)).collect();
    (0..code.order())
        .map(|g| {
            let u = code.element(g);
            (u.restrict(frame0), u.restrict(&system0).with_phase(u.phase_exp()))
        })
        .unzip()
}

/// `c(g, h)` as the phase exponent of `U_R^g U_R^h` relative to `U_R^{gh}`.
pub fn compute_cocycle(fragments_r: &[PauliOperator]) -> Vec<Vec<u8>> {
    let size = fragments_r.len();
    (0..size)
        .map(|g| {
            (0..size)
                .map(|h| {
                    let prod = fragments_r[g].multiply(&fragments_r[h]).expect("same frame size");
                    debug_assert_eq!(prod.unsigned(), fragments_r[g ^ h].unsigned());
                    (prod.phase_exp() + 4 - fragments_r[g ^ h].phase_exp()) % 4
                })
                .collect()
        })
        .collect()
}

/// Single-qubit +1 eigenstate of a Hermitian letter (`|0⟩` for `I`).
fn letter_eigenstate(l: Letter) -> DenseState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match l {
        Letter::I | Letter::Z => DenseState::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]),
        Letter::X => DenseState::from_vec(vec![c(h, 0.0), c(h, 0.0)]),
        Letter::Y => DenseState::from_vec(vec![c(h, 0.0), c(0.0, h)]),
    }
}

/// Tensor product of +1 eigenstates, first letter on the most significant qubit.
pub fn product_eigenstate(letters: &[Letter]) -> DenseState {
    letters.iter().fold(DenseState::from_vec(vec![c(1.0, 0.0)]), |acc, &l| acc.kronecker(&letter_eigenstate(l)))
}

/// Product state from a descriptor over `+ - 0 1 r l` (X, Z and Y eigenstates).
pub fn product_state(descriptor: &str) -> Result<DenseState> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = DenseState::from_vec(vec![c(1.0, 0.0)]);
    for (offset, ch) in descriptor.char_indices() {
        let v = match ch {
            '+' => [c(h, 0.0), c(h, 0.0)],
            '-' => [c(h, 0.0), c(-h, 0.0)],
            '0' => [c(1.0, 0.0), c(0.0, 0.0)],
            '1' => [c(0.0, 0.0), c(1.0, 0.0)],
            'r' => [c(h, 0.0), c(0.0, h)],
            'l' => [c(h, 0.0), c(0.0, -h)],
            _ => {
                return Err(Error::Parse {
                    offset,
                    message: format!("unknown seed symbol '{ch}', expected one of + - 0 1 r l"),
                })
            }
        };
        out = out.kronecker(&DenseState::from_vec(v.to_vec()));
    }
    Ok(out)
}

/// Largest `|⟨e|U_R^g|e⟩|` over `g ≠ e`, after checking the seed is normalised.
pub fn validate_seed(fragments_r: &[PauliOperator], seed: &DenseState) -> Result<f64> {
    let m = fragments_r.first().map_or(0, |p| p.n());
    if seed.len() != 1 << m {
        return Err(Error::Dimension { expected: 1 << m, got: seed.len() });
    }
    let norm_dev = (seed.norm() - 1.0).abs();
    if norm_dev > FRAME_TOL {
        return Err(Error::InvalidSeed(format!("seed norm deviates from 1 by {norm_dev:.3e}")));
    }
    let mut worst = 0.0f64;
    for (g, u) in fragments_r.iter().enumerate().skip(1) {
        let overlap = dense::inner_product(seed, &dense::apply_pauli(u, seed)?).norm();
        if overlap > FRAME_TOL {
            return Err(Error::InvalidSeed(format!(
                "overlap with fragment {} ({u}) is {overlap:.3e}",
                GroupElement::from_index(fragments_r.len().trailing_zeros() as usize, g)
            )));
        }
        worst = worst.max(overlap);
    }
    Ok(worst)
}

/// Searches product eigenstates first, then stabilizer states of a commuting
/// subgroup that avoids every fragment string.
pub fn find_seed(fragments_r: &[PauliOperator], basis: &SeedBasis) -> Result<DenseState> {
    if let SeedBasis::Custom(state) = basis {
        validate_seed(fragments_r, state)?;
        return Ok(state.clone());
    }
    let m = fragments_r.first().map_or(0, |p| p.n());
    let order = match basis {
        SeedBasis::Y => [Letter::Y, Letter::X, Letter::Z],
        _ => [Letter::X, Letter::Y, Letter::Z],
    };
    if m <= PRODUCT_SEED_MAX_M {
        if let Some(letters) = product_seed_letters(fragments_r, m, &order) {
            let seed = product_eigenstate(&letters);
            validate_seed(fragments_r, &seed)?;
            return Ok(seed);
        }
    }
    let seed = subgroup_seed(fragments_r, m)?;
    validate_seed(fragments_r, &seed)?;
    Ok(seed)
}

/// First letter assignment (lexicographic in `order`) such that every
/// non-trivial fragment anticommutes with the seed letter on some qubit.
fn product_seed_letters(fragments_r: &[PauliOperator], m: usize, order: &[Letter; 3]) -> Option<Vec<Letter>> {
    let total = 3usize.checked_pow(m as u32)?;
    (0..total).find_map(|code| {
        let mut letters = vec![Letter::I; m];
        let mut rest = code;
        for q in (0..m).rev() {
            letters[q] = order[rest % 3];
            rest /= 3;
        }
        let ok = fragments_r.iter().skip(1).all(|u| {
            (0..m).any(|q| {
                let l = u.letter(q);
                l != Letter::I && l != letters[q]
            })
        });
        ok.then_some(letters)
    })
}

/// Grows a maximal commuting subgroup of lowest-key strings avoiding the
/// fragment strings; its stabilizer state has vanishing overlap with them.
fn subgroup_seed(fragments_r: &[PauliOperator], m: usize) -> Result<DenseState> {
    let forbidden: HashSet<BitVec> = fragments_r.iter().skip(1).map(|u| u.symplectic()).collect();
    let candidates: Vec<PauliOperator> = all_strings_by_key(m).into_iter().skip(1).collect();
    let mut chosen: Vec<PauliOperator> = Vec::new();
    let mut elements: Vec<PauliOperator> = vec![PauliOperator::identity(m)];
    let mut budget = SUBGROUP_SEARCH_BUDGET;
    if !grow(&candidates, 0, m, &forbidden, &mut chosen, &mut elements, &mut budget) {
        return Err(Error::SeedNotFound(format!(
            "no commuting subgroup of rank {m} avoids the {} fragment strings",
            forbidden.len()
        )));
    }
    let mut projected = None;
    for b in 0..1usize << m {
        let mut v = dense::basis_state(m, b);
        for q in &chosen {
            v = (&v + dense::apply_pauli(q, &v)?) * c(0.5, 0.0);
        }
        let norm = v.norm();
        if norm > 1e-8 {
            projected = Some(v / c(norm, 0.0));
            break;
        }
    }
    projected.ok_or_else(|| Error::SeedNotFound("stabilizer state projection vanished".into()))
}

fn grow(
    candidates: &[PauliOperator],
    start: usize,
    m: usize,
    forbidden: &HashSet<BitVec>,
    chosen: &mut Vec<PauliOperator>,
    elements: &mut Vec<PauliOperator>,
    budget: &mut usize,
) -> bool {
    if chosen.len() == m {
        return true;
    }
    for (i, q) in candidates.iter().enumerate().skip(start) {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if !chosen.iter().all(|p| p.commutes(q).unwrap()) {
            continue;
        }
        let sym = q.symplectic();
        if elements.iter().any(|e| e.symplectic() == sym) {
            continue;
        }
        let extension: Vec<PauliOperator> = elements.iter().map(|e| e.multiply(q).unwrap()).collect();
        if extension.iter().any(|e| forbidden.contains(&e.symplectic())) {
            continue;
        }
        let before = elements.len();
        elements.extend(extension);
        chosen.push(q.clone());
        if grow(candidates, i + 1, m, forbidden, chosen, elements, budget) {
            return true;
        }
        chosen.pop();
        elements.truncate(before);
    }
    false
}

/// Per-qubit pointer state and logical unitary for one error.
#[derive(Clone, Debug)]
pub struct PointerRecord {
    pub error: PauliOperator,
    pub pointer: DenseState,
    pub logical: DenseOperator,
    pub residual: f64,
    pub unitarity: f64,
}

/// Result of recovering an error set through the disentangler.
#[derive(Clone, Debug)]
pub struct DisentanglerRecovery {
    pub records: Vec<PointerRecord>,
    /// Largest deviation of the pointer Gram matrix from the identity.
    pub gram_deviation: f64,
}

impl DisentanglerRecovery {
    pub fn max_residual(&self) -> f64 {
        self.records.iter().map(|r| r.residual.max(r.unitarity)).fold(0.0, f64::max)
    }
}

/// A local frame with seed, orientation basis and cocycle.
#[derive(Clone, Debug)]
pub struct LocalFrame {
    code: StabilizerCode,
    selection: FrameSelection,
    r0: Vec<usize>,
    s0: Vec<usize>,
    fragments_r: Vec<PauliOperator>,
    fragments_s: Vec<PauliOperator>,
    seed: DenseState,
    orientation: Vec<DenseState>,
    cocycle: Vec<Vec<u8>>,
}

impl LocalFrame {
    /// Builds the frame on the selected qubits with a searched or supplied seed.
    pub fn new(code: &StabilizerCode, override_drop: Option<&[usize]>, basis: &SeedBasis) -> Result<Self> {
        let selection = select_frame_qubits(code, override_drop)?;
        let r0: Vec<usize> = selection.frame.iter().map(|q| q - 1).collect();
        let s0: Vec<usize> = selection.drop_set.iter().map(|q| q - 1).collect();
        let (fragments_r, fragments_s) = split_fragments(code, &r0);
        let seed = find_seed(&fragments_r, basis)?;
        let orientation = fragments_r.iter().map(|u| dense::apply_pauli(u, &seed)).collect::<Result<Vec<_>>>()?;
        let cocycle = compute_cocycle(&fragments_r);
        let frame =
            LocalFrame { code: code.clone(), selection, r0, s0, fragments_r, fragments_s, seed, orientation, cocycle };
        let dev = frame.orthonormality_deviation();
        if dev > FRAME_TOL {
            return Err(Error::NonIdealBasis(dev));
        }
        Ok(frame)
    }

    /// Frame on the given 1-based frame qubits.
    pub fn on_qubits(code: &StabilizerCode, frame: &[usize], basis: &SeedBasis) -> Result<Self> {
        LocalFrame::new(code, Some(&drop_set_for_frame(code.n(), frame)), basis)
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn frame_qubits(&self) -> &[usize] {
        &self.selection.frame
    }

    pub fn system_qubits(&self) -> &[usize] {
        &self.selection.drop_set
    }

    pub(crate) fn frame0(&self) -> &[usize] {
        &self.r0
    }

    pub(crate) fn system0(&self) -> &[usize] {
        &self.s0
    }

    pub fn fragments_r(&self) -> &[PauliOperator] {
        &self.fragments_r
    }

    pub fn fragments_s(&self) -> &[PauliOperator] {
        &self.fragments_s
    }

    pub fn seed(&self) -> &DenseState {
        &self.seed
    }

    /// `|g⟩` on the frame factor.
    pub fn orientation(&self, g: usize) -> &DenseState {
        &self.orientation[g]
    }

    pub fn orientation_basis(&self) -> &[DenseState] {
        &self.orientation
    }

    /// Phase exponent of `c(g, h)`.
    pub fn cocycle(&self, g: usize, h: usize) -> u8 {
        self.cocycle[g][h]
    }

    pub fn cocycle_table(&self) -> &[Vec<u8>] {
        &self.cocycle
    }

    pub fn order(&self) -> usize {
        self.fragments_r.len()
    }

    fn sqrt_order(&self) -> f64 {
        (self.order() as f64).sqrt()
    }

    /// Largest entry of `⟨g|h⟩ − δ_{gh}`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (g, a) in self.orientation.iter().enumerate() {
            for (h, b) in self.orientation.iter().enumerate() {
                let target = if g == h { 1.0 } else { 0.0 };
                worst = worst.max((dense::inner_product(a, b) - c(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Largest deviation of `U_R^g|h⟩ = c(g,h)|gh⟩` over all pairs.
    pub fn covariance_deviation(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for g in 0..self.order() {
            for h in 0..self.order() {
                let lhs = dense::apply_pauli(&self.fragments_r[g], &self.orientation[h])?;
                let rhs = &self.orientation[g ^ h] * dense::i_pow(self.cocycle[g][h] as usize);
                worst = worst.max(dense::max_abs_diff_state(&lhs, &rhs));
            }
        }
        Ok(worst)
    }

    /// Whether `U_R^g ⊗ U_S^g` reproduces `U^g` with its phase for every `g`.
    pub fn reconstructs_group(&self) -> bool {
        (0..self.order()).all(|g| {
            let mut u = PauliOperator::identity(self.code.n()).with_phase(self.fragments_s[g].phase_exp());
            for (i, &q) in self.r0.iter().enumerate() {
                u.set_letter(q, self.fragments_r[g].letter(i));
            }
            for (i, &q) in self.s0.iter().enumerate() {
                u.set_letter(q, self.fragments_s[g].letter(i));
            }
            u == self.code.element(g)
        })
    }

    /// `Π |ψ⟩` after checking that `ψ` already lies in the code space.
    fn checked_code_state(&self, state: &DenseState) -> Result<()> {
        let projected = stabilizer::apply_code_projector(&self.code, state)?;
        let residual = (state - projected).norm();
        if residual > CODE_SPACE_TOL * state.norm().max(1.0) {
            return Err(Error::NotInCodeSpace(residual));
        }
        Ok(())
    }

    /// `R^g |ψ⟩ = √|G| (⟨g| ⊗ I) Π |ψ⟩`, a state on the system qubits.
    pub fn page_wootters_reduce(&self, state: &DenseState, g: usize) -> Result<DenseState> {
        self.checked_code_state(state)?;
        let reduced = dense::contract_bra(&self.orientation[g], &self.r0, state)?;
        Ok(reduced * c(self.sqrt_order(), 0.0))
    }

    /// `(R^g)† |φ⟩ = √|G| Π (|g⟩ ⊗ |φ⟩)`.
    pub fn inverse_reduce(&self, phi: &DenseState, g: usize) -> Result<DenseState> {
        let n = self.code.n();
        let joint = dense::kron_state(n, &[(&self.orientation[g], &self.r0), (phi, &self.s0)])?;
        Ok(stabilizer::apply_code_projector(&self.code, &joint)? * c(self.sqrt_order(), 0.0))
    }

    /// `T = Σ_g |g⟩⟨g| ⊗ (U_S^g)†` as a full matrix.
    pub fn disentangler(&self) -> Result<DenseOperator> {
        let n = self.code.n();
        dense::check_cap(n, dense::MATRIX_CAP)?;
        let mut t = DenseOperator::zeros(1 << n, 1 << n);
        for g in 0..self.order() {
            let proj = dense::outer(&self.orientation[g], &self.orientation[g]);
            let us = dense::pauli_matrix(&self.fragments_s[g].dagger())?;
            t += dense::embed(n, &[(&proj, &self.r0), (&us, &self.s0)])?;
        }
        Ok(t)
    }

    /// `T |ψ⟩` without forming the matrix.
    pub fn apply_disentangler(&self, state: &DenseState) -> Result<DenseState> {
        let n = self.code.n();
        dense::check_cap(n, dense::STATE_CAP)?;
        let mut out = dense::zero_state(n);
        for g in 0..self.order() {
            let branch = dense::contract_bra(&self.orientation[g], &self.r0, state)?;
            let moved = dense::apply_pauli(&self.fragments_s[g].dagger(), &branch)?;
            out += dense::kron_state(n, &[(&self.orientation[g], &self.r0), (&moved, &self.s0)])?;
        }
        Ok(out)
    }

    /// `|χ⟩ = |G|^{-1/2} Σ_g χ(g) |g⟩` on the frame factor.
    pub fn character_state(&self, chi: usize) -> DenseState {
        let mut out = DenseState::zeros(self.order());
        for (g, v) in self.orientation.iter().enumerate() {
            out += v * c(chi_sign(chi, g), 0.0);
        }
        out / c(self.sqrt_order(), 0.0)
    }

    /// `O = |G| Π (|g⟩⟨g| ⊗ f_S) Π`.
    pub fn relational_observable(&self, f_s: &DenseOperator, g: usize) -> Result<DenseOperator> {
        let n = self.code.n();
        let pi = stabilizer::code_projector(&self.code)?;
        let proj = dense::outer(&self.orientation[g], &self.orientation[g]);
        let inner = dense::embed(n, &[(&proj, &self.r0), (f_s, &self.s0)])?;
        Ok(&pi * inner * &pi * c(self.order() as f64, 0.0))
    }

    /// Pointer states and logical unitaries with `T E |ψ̄⟩ = |w(E)⟩ ⊗ L(E)|ψ⟩`,
    /// where `|ψ⟩ = R^e |ψ̄⟩`. The error set must satisfy the KL condition.
    pub fn recover_via_disentangler(&self, errors: &[PauliOperator]) -> Result<DisentanglerRecovery> {
        let report = crate::error_frames::kl_check(&self.code, errors)?;
        if let Some(&(i, j)) = report.violations.first() {
            return Err(Error::NotCorrectable(format!("pair ({}, {}) = ({}, {})", i + 1, j + 1, errors[i], errors[j])));
        }
        let words = stabilizer::codewords(&self.code)?;
        let phis = words.iter().map(|w| self.page_wootters_reduce(w, 0)).collect::<Result<Vec<_>>>()?;
        let d_s = words.len();
        let d_r = self.order();
        let mut records = Vec::with_capacity(errors.len());
        for e in errors {
            // W_r[s][j] = (⟨r| ⊗ ⟨s|) T E |j̄⟩ in the frame computational basis r
            // and the reduced basis φ_s.
            let images = words
                .iter()
                .map(|w| self.apply_disentangler(&dense::apply_pauli(e, w)?))
                .collect::<Result<Vec<_>>>()?;
            let blocks: Vec<DenseOperator> = (0..d_r)
                .map(|r| {
                    let bra = dense::basis_state(self.r0.len(), r);
                    let mut w = DenseOperator::zeros(d_s, d_s);
                    for (j, img) in images.iter().enumerate() {
                        let cond = dense::contract_bra(&bra, &self.r0, img).expect("frame dimensions agree");
                        for (s, phi) in phis.iter().enumerate() {
                            w[(s, j)] = dense::inner_product(phi, &cond);
                        }
                    }
                    w
                })
                .collect();
            let (r_star, _) =
                blocks
                    .iter()
                    .enumerate()
                    .fold((0, -1.0), |best, (r, b)| if b.norm() > best.1 + 1e-12 { (r, b.norm()) } else { best });
            let scale = blocks[r_star].norm() / (d_s as f64).sqrt();
            let logical = &blocks[r_star] / c(scale, 0.0);
            let mut pointer = DenseState::zeros(d_r);
            let mut residual = 0.0f64;
            for (r, b) in blocks.iter().enumerate() {
                let w_r: C64 = (logical.adjoint() * b).trace() / c(d_s as f64, 0.0);
                pointer[r] = w_r;
                residual = residual.max(dense::max_abs_diff(b, &(&logical * w_r)));
            }
            let unitarity = dense::unitarity_deviation(&logical);
            records.push(PointerRecord { error: e.clone(), pointer, logical, residual, unitarity });
        }
        let mut gram_deviation = 0.0f64;
        for (i, a) in records.iter().enumerate() {
            for (j, b) in records.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                gram_deviation =
                    gram_deviation.max((dense::inner_product(&a.pointer, &b.pointer) - c(target, 0.0)).norm());
            }
        }
        Ok(DisentanglerRecovery { records, gram_deviation })
    }

    /// `T Ê_χ Π T† − |χ⟩⟨1| ⊗ I_S` in max norm, maximised over `χ`, with
    /// `Ê_χ = Σ_g χ(g)|g⟩⟨g| ⊗ I_S`.
    pub fn trivialized_error_deviation(&self) -> Result<f64> {
        let n = self.code.n();
        let t = self.disentangler()?;
        let pi = stabilizer::code_projector(&self.code)?;
        let id_s = DenseOperator::identity(1 << self.s0.len(), 1 << self.s0.len());
        let one = self.character_state(0);
        let mut worst = 0.0f64;
        for chi in 0..self.order() {
            let mut dual = DenseOperator::zeros(self.order(), self.order());
            for (g, v) in self.orientation.iter().enumerate() {
                dual += dense::outer(v, v) * c(chi_sign(chi, g), 0.0);
            }
            let e_hat = dense::embed(n, &[(&dual, &self.r0)])?;
            let lhs = &t * e_hat * &pi * t.adjoint();
            let target =
                dense::embed(n, &[(&dense::outer(&self.character_state(chi), &one), &self.r0), (&id_s, &self.s0)])?;
            worst = worst.max(dense::max_abs_diff(&lhs, &target));
        }
        Ok(worst)
    }
}

/// `V = R_{R'}^{g'} (R_R^g)†` applied to a reduced state of frame `a`.
pub fn qrf_transform(
    a: &LocalFrame,
    b: &LocalFrame,
    state: &DenseState,
    g: usize,
    g_prime: usize,
) -> Result<DenseState> {
    if a.code.generators() != b.code.generators() {
        return Err(Error::CodeMismatch("frames are defined on different codes".into()));
    }
    let lifted = a.inverse_reduce(state, g)?;
    b.page_wootters_reduce(&lifted, g_prime)
}

/// Paulis `E` (phase +1) with `E Π = e_R ⊗ I_S` for some non-zero `e_R`,
/// found by scanning all `4^n` strings.
pub fn frame_local_restricted_paulis(frame: &LocalFrame, tol: f64) -> Result<Vec<PauliOperator>> {
    let code = frame.code();
    let n = code.n();
    dense::check_cap(n, dense::MATRIX_CAP)?;
    let pi = stabilizer::code_projector(code)?;
    let (r0, s0) = (frame.frame0(), frame.system0());
    let (d_r, d_s) = (1usize << r0.len(), 1usize << s0.len());
    let mut found = Vec::new();
    for e in all_strings_by_key(n) {
        let m = dense::apply_pauli_left(&e, &pi)?;
        let mut residual = 0.0f64;
        let mut e_norm = 0.0f64;
        for r in 0..d_r {
            for rp in 0..d_r {
                let idx = |rr: usize, s: usize| dense::scatter_index(n, &[(rr, r0), (s, s0)]);
                let mean: C64 = (0..d_s).map(|s| m[(idx(r, s), idx(rp, s))]).sum::<C64>() / c(d_s as f64, 0.0);
                e_norm = e_norm.max(mean.norm());
                for s in 0..d_s {
                    for sp in 0..d_s {
                        let target = if s == sp { mean } else { c(0.0, 0.0) };
                        residual = residual.max((m[(idx(r, s), idx(rp, sp))] - target).norm());
                    }
                }
            }
        }
        if residual < tol && e_norm > tol {
            found.push(e);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::build_code;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn three() -> StabilizerCode {
        build_code(3, vec![p("ZZI"), p("IZZ")]).unwrap()
    }

    #[test]
    fn default_selection_drops_first_qubit() {
        let sel = select_frame_qubits(&three(), None).unwrap();
        assert_eq!(sel.drop_set, vec![1]);
        assert_eq!(sel.frame, vec![2, 3]);
    }

    #[test]
    fn override_is_validated() {
        let sel = select_frame_qubits(&three(), Some(&[3])).unwrap();
        assert_eq!(sel.frame, vec![1, 2]);
        let code = build_code(3, vec![p("ZZI"), p("ZIZ")]).unwrap();
        // Dropping qubit 1 leaves ZI and IZ on qubits 2,3: faithful.
        assert!(select_frame_qubits(&code, Some(&[1])).is_ok());
        let code = build_code(3, vec![p("XXI"), p("ZZI")]).unwrap();
        assert!(matches!(select_frame_qubits(&code, Some(&[1, 2])), Err(Error::Invalid(_))));
        let code = build_code(4, vec![p("ZZII"), p("IIZZ")]).unwrap();
        assert_eq!(select_frame_qubits(&code, Some(&[1, 2])).unwrap_err(), Error::Unfaithful("-+".into()));
    }

    #[test]
    fn three_qubit_seed_is_plus_plus() {
        let frame = LocalFrame::on_qubits(&three(), &[1, 2], &SeedBasis::X).unwrap();
        assert!(dense::max_abs_diff_state(frame.seed(), &product_state("++").unwrap()) < 1e-15);
        assert!(frame.cocycle_table().iter().flatten().all(|&v| v == 0));
        assert!(frame.reconstructs_group());
    }

    #[test]
    fn entangled_seed_for_non_product_fragments() {
        let frags: Vec<PauliOperator> =
            ["III", "IIX", "IIY", "XXI", "IIZ", "XXX", "XXY", "XXZ"].iter().map(|s| p(s)).collect();
        let bell_seed = (dense::ket("011") + dense::ket("110")) / c(2f64.sqrt(), 0.0);
        assert!(validate_seed(&frags, &bell_seed).is_ok());
        let found = find_seed(&frags, &SeedBasis::X).unwrap();
        assert!(validate_seed(&frags, &found).is_ok());
        assert!(product_seed_letters(&frags, 3, &[Letter::X, Letter::Y, Letter::Z]).is_none());
    }

    #[test]
    fn page_wootters_on_three_qubit_codewords() {
        let code = three();
        let frame = LocalFrame::on_qubits(&code, &[1, 2], &SeedBasis::X).unwrap();
        let words = stabilizer::codewords(&code).unwrap();
        assert!(
            dense::max_abs_diff_state(&frame.page_wootters_reduce(&words[0], 0).unwrap(), &dense::ket("0")) < 1e-12
        );
        assert!(
            dense::max_abs_diff_state(&frame.page_wootters_reduce(&words[1], 0).unwrap(), &dense::ket("1")) < 1e-12
        );
        assert!(frame.page_wootters_reduce(&dense::ket("100"), 0).is_err());
    }

    #[test]
    fn product_state_descriptor() {
        assert!(product_state("+x").is_err());
        let s = product_state("0r").unwrap();
        assert!((s[1] - c(0.0, std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-15);
    }
}
