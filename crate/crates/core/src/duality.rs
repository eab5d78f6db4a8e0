//! Pontryagin-dual representations and gauge-fixing ("magnetic") errors.
//!
//! Dual operators are kept as Pauli strings when they coincide with one and
//! as dense matrices otherwise. Dense work is capped at
//! [`dense::MATRIX_CAP`] qubits.

use crate::dense::{self, c, DenseOperator, DenseState, C64};
use crate::error::{Error, Result};
use crate::error_frames::{FrameFields, NonlocalFactorization};
use crate::group::{chi_sign, Character, GroupElement};
use crate::pauli::PauliOperator;
use crate::qrf_local::{LocalFrame, FRAME_TOL};
use crate::stabilizer::{self, StabilizerCode};

/// Entrywise tolerance used to recognise a dense operator as a Pauli string.
pub const PAULI_MATCH_TOL: f64 = 1e-10;

/// A single `Û^χ`.
#[derive(Clone, Debug)]
pub enum DualOperator {
    Pauli(PauliOperator),
    Dense(DenseOperator),
}

impl DualOperator {
    fn recognise(op: DenseOperator) -> Self {
        match dense::as_pauli(&op, PAULI_MATCH_TOL) {
            Some(p) => DualOperator::Pauli(p),
            None => DualOperator::Dense(op),
        }
    }

    pub fn as_pauli(&self) -> Option<&PauliOperator> {
        match self {
            DualOperator::Pauli(p) => Some(p),
            DualOperator::Dense(_) => None,
        }
    }

    pub fn matrix(&self) -> Result<DenseOperator> {
        match self {
            DualOperator::Pauli(p) => dense::pauli_matrix(p),
            DualOperator::Dense(m) => Ok(m.clone()),
        }
    }

    pub fn apply(&self, state: &DenseState) -> Result<DenseState> {
        match self {
            DualOperator::Pauli(p) => dense::apply_pauli(p, state),
            DualOperator::Dense(m) => Ok(m * state),
        }
    }

    /// Text form: the Pauli string, or `dense`.
    pub fn describe(&self) -> String {
        match self {
            DualOperator::Pauli(p) => p.to_string(),
            DualOperator::Dense(_) => "dense".to_string(),
        }
    }
}

/// A representation `χ ↦ Û^χ` of the dual group, indexed by character.
#[derive(Clone, Debug)]
pub struct DualRep {
    code: StabilizerCode,
    ops: Vec<DualOperator>,
}

impl DualRep {
    /// Wraps explicit operators, one per character in index order.
    pub fn new(code: &StabilizerCode, ops: Vec<DualOperator>) -> Result<Self> {
        if ops.len() != code.order() {
            return Err(Error::Dimension { expected: code.order(), got: ops.len() });
        }
        Ok(DualRep { code: code.clone(), ops })
    }

    pub fn from_paulis(code: &StabilizerCode, ops: Vec<PauliOperator>) -> Result<Self> {
        Self::new(code, ops.into_iter().map(DualOperator::Pauli).collect())
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn op(&self, chi: usize) -> &DualOperator {
        &self.ops[chi]
    }

    pub fn ops(&self) -> &[DualOperator] {
        &self.ops
    }

    /// The Pauli strings, if every operator is one.
    pub fn as_paulis(&self) -> Option<Vec<PauliOperator>> {
        self.ops.iter().map(|o| o.as_pauli().cloned()).collect()
    }

    pub fn matrices(&self) -> Result<Vec<DenseOperator>> {
        self.ops.iter().map(DualOperator::matrix).collect()
    }

    /// `P̂_g = |G|^{-1} Σ_χ χ(g) Û^χ`.
    pub fn dual_projector(&self, g: usize) -> Result<DenseOperator> {
        let mats = self.matrices()?;
        Ok(dual_projector_from(&mats, g))
    }

    /// Largest deviation of `U^g P̂_h U^g = P̂_{gh}` over generators `g`.
    pub fn projector_covariance_deviation(&self) -> Result<f64> {
        let mats = self.matrices()?;
        let projectors: Vec<DenseOperator> = (0..self.code.order()).map(|g| dual_projector_from(&mats, g)).collect();
        let mut worst = 0.0f64;
        for i in 0..self.code.m() {
            let u = dense::pauli_matrix(&self.code.generators()[i])?;
            for (h, p) in projectors.iter().enumerate() {
                worst = worst.max(dense::max_abs_diff(&(&u * p * &u), &projectors[h ^ (1 << i)]));
            }
        }
        Ok(worst)
    }

    /// Largest `|Tr(Û^χ Û^η)/2^n − δ_{χη}|`.
    pub fn trace_orthogonality_deviation(&self) -> Result<f64> {
        let mats = self.matrices()?;
        let dim = mats.first().map(|m| m.nrows()).unwrap_or(1) as f64;
        let mut worst = 0.0f64;
        for (a, ma) in mats.iter().enumerate() {
            for (b, mb) in mats.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max(((ma * mb).trace() / c(dim, 0.0) - c(target, 0.0)).norm());
            }
        }
        Ok(worst)
    }
}

fn dual_projector_from(mats: &[DenseOperator], g: usize) -> DenseOperator {
    let dim = mats[0].nrows();
    let mut p = DenseOperator::zeros(dim, dim);
    for (chi, m) in mats.iter().enumerate() {
        p += m * c(chi_sign(chi, g), 0.0);
    }
    p / c(mats.len() as f64, 0.0)
}

/// `Û^χ_R = Σ_g χ(g) |g⟩⟨g|_R ⊗ I_S` from an ideal orientation basis.
pub fn dual_rep_from_basis(frame: &LocalFrame) -> Result<DualRep> {
    let code = frame.code();
    let deviation = frame.orthonormality_deviation();
    if deviation > FRAME_TOL {
        return Err(Error::NonIdealBasis(deviation));
    }
    let n = code.n();
    if code.m() == 0 {
        return DualRep::from_paulis(code, vec![PauliOperator::identity(n)]);
    }
    let frame0 = frame.frame0();
    let size = frame.order();
    let dim_r = frame.orientation(0).len();
    let mut ops = Vec::with_capacity(size);
    for chi in 0..size {
        let mut local = DenseOperator::zeros(dim_r, dim_r);
        for g in 0..size {
            let v = frame.orientation(g);
            local += dense::outer(v, v) * c(chi_sign(chi, g), 0.0);
        }
        match dense::as_pauli(&local, PAULI_MATCH_TOL) {
            Some(p) => {
                let mut full = PauliOperator::identity(n).with_phase(p.phase_exp());
                for (i, &q) in frame0.iter().enumerate() {
                    full.set_letter(q, p.letter(i));
                }
                ops.push(DualOperator::Pauli(full));
            }
            None => ops.push(DualOperator::Dense(dense::embed(n, &[(&local, frame0)])?)),
        }
    }
    DualRep::new(code, ops)
}

/// `Û^χ_R = Σ_η R_{χη} R_η^{-1} P_η`, with `R_η^{-1} = Π E_η†` on `ℋ_η`.
pub fn dual_rep_from_frame_fields(fields: &FrameFields) -> Result<DualRep> {
    let code = fields.code();
    let size = code.order();
    let pi = stabilizer::code_projector(code)?;
    let projectors = Character::all(code.m())
        .iter()
        .map(|chi| stabilizer::isotype_projector(code, chi))
        .collect::<Result<Vec<_>>>()?;
    let mats = fields.fields().iter().map(dense::pauli_matrix).collect::<Result<Vec<_>>>()?;
    let mut ops = Vec::with_capacity(size);
    for chi in 0..size {
        let dim = pi.nrows();
        let mut u = DenseOperator::zeros(dim, dim);
        for eta in 0..size {
            u += &mats[chi ^ eta] * &pi * mats[eta].adjoint() * &projectors[eta];
        }
        ops.push(DualOperator::recognise(u));
    }
    DualRep::new(code, ops)
}

/// `Û^χ = t† (I ⊗ Σ_g χ(g)|g⟩⟨g|) t`, which shifts `|η⟩ ↦ |χη⟩` on the gauge factor.
pub fn dual_rep_from_factorization(code: &StabilizerCode, fact: &NonlocalFactorization) -> Result<DualRep> {
    dense::check_cap(code.n(), dense::MATRIX_CAP)?;
    let size = fact.order();
    let dim = 1usize << code.n();
    let logical = dim / size;
    let mut ops = Vec::with_capacity(size);
    for chi in 0..size {
        let mut u = DenseOperator::zeros(dim, dim);
        for j in 0..logical {
            for eta in 0..size {
                u += dense::outer(fact.column(j, chi ^ eta), fact.column(j, eta));
            }
        }
        ops.push(DualOperator::recognise(u));
    }
    DualRep::new(code, ops)
}

/// Outcome of a duality check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DualityVerdict {
    pub passed: bool,
    /// First generator pair `(g, χ)` (group and character indices) breaking
    /// `U^g Û^χ = χ(g) Û^χ U^g`.
    pub weyl_violation: Option<(usize, usize)>,
    /// First pair `(χ, η)` breaking `Û^χ Û^η = Û^{χη}` (with `(0, 0)` for `Û^1 ≠ I`).
    pub representation_violation: Option<(usize, usize)>,
    pub max_deviation: f64,
}

/// Checks the Weyl relation on generator pairs and the homomorphism property.
pub fn check_duality(code: &StabilizerCode, rep: &DualRep, tol: f64) -> Result<DualityVerdict> {
    if rep.ops.len() != code.order() {
        return Err(Error::Dimension { expected: code.order(), got: rep.ops.len() });
    }
    if let Some(paulis) = rep.as_paulis() {
        return Ok(check_duality_pauli(code, &paulis));
    }
    let mats = rep.matrices()?;
    let dim = mats[0].nrows();
    let mut worst = 0.0f64;
    let mut weyl_violation = None;
    for i in 0..code.m() {
        let u = dense::pauli_matrix(&code.generators()[i])?;
        for j in 0..code.m() {
            let chi = 1usize << j;
            let sign = chi_sign(chi, 1 << i);
            let d = dense::max_abs_diff(&(&u * &mats[chi]), &(&mats[chi] * &u * c(sign, 0.0)));
            worst = worst.max(d);
            if d > tol && weyl_violation.is_none() {
                weyl_violation = Some((1 << i, chi));
            }
        }
    }
    let mut representation_violation = None;
    let d = dense::max_abs_diff(&mats[0], &DenseOperator::identity(dim, dim));
    worst = worst.max(d);
    if d > tol {
        representation_violation = Some((0, 0));
    }
    let m = code.m();
    for i in 0..m {
        for j in i..m {
            let (a, b) = (&mats[1 << i], &mats[1 << j]);
            let target = if i == j { DenseOperator::identity(dim, dim) } else { b * a };
            let d = dense::max_abs_diff(&(a * b), &target);
            worst = worst.max(d);
            if d > tol && representation_violation.is_none() {
                representation_violation = Some((1 << i, 1 << j));
            }
        }
    }
    for chi in 1..mats.len() {
        let (rest, low) = (chi & (chi - 1), chi & chi.wrapping_neg());
        let d = dense::max_abs_diff(&(&mats[rest] * &mats[low]), &mats[chi]);
        worst = worst.max(d);
        if d > tol && representation_violation.is_none() {
            representation_violation = Some((rest, low));
        }
    }
    Ok(DualityVerdict {
        passed: weyl_violation.is_none() && representation_violation.is_none(),
        weyl_violation,
        representation_violation,
        max_deviation: worst,
    })
}

fn check_duality_pauli(code: &StabilizerCode, ops: &[PauliOperator]) -> DualityVerdict {
    let mut weyl_violation = None;
    'outer: for i in 0..code.m() {
        for j in 0..code.m() {
            let chi = 1usize << j;
            let commutes = code.generators()[i].commutes(&ops[chi]).unwrap_or(false);
            if commutes != (chi_sign(chi, 1 << i) > 0.0) {
                weyl_violation = Some((1 << i, chi));
                break 'outer;
            }
        }
    }
    let mut representation_violation = (!ops[0].is_identity()).then_some((0, 0));
    let m = code.m();
    if representation_violation.is_none() {
        'gens: for i in 0..m {
            for j in i..m {
                let (a, b) = (&ops[1 << i], &ops[1 << j]);
                let ok = if i == j {
                    a.multiply(a).map(|p| p.is_identity()).unwrap_or(false)
                } else {
                    a.commutes(b).unwrap_or(false)
                };
                if !ok {
                    representation_violation = Some((1 << i, 1 << j));
                    break 'gens;
                }
            }
        }
    }
    if representation_violation.is_none() {
        for chi in 1..ops.len() {
            let (rest, low) = (chi & (chi - 1), chi & chi.wrapping_neg());
            if ops[rest].multiply(&ops[low]).map(|p| p != ops[chi]).unwrap_or(true) {
                representation_violation = Some((rest, low));
                break;
            }
        }
    }
    let passed = weyl_violation.is_none() && representation_violation.is_none();
    DualityVerdict { passed, weyl_violation, representation_violation, max_deviation: if passed { 0.0 } else { 2.0 } }
}

/// Default bijection `h(χ, g) = g ⊕ bits(χ)`.
pub fn default_bijection(chi: usize, g: usize) -> usize {
    g ^ chi
}

/// Dual projectors and unitary gauge-fixing errors built from a dual
/// representation and a base Pauli error set indexed by sector.
#[derive(Clone, Debug)]
pub struct GaugeFixErrorSet {
    code: StabilizerCode,
    projectors: Vec<DenseOperator>,
    unitaries: Vec<DenseOperator>,
    bijection: Vec<Vec<usize>>,
}

/// Builds `Ê_g = √|G| Σ_χ P̂_{h(χ,g)} Π E_χ`.
pub fn gauge_fix_errors(
    rep: &DualRep,
    base: &[PauliOperator],
    h: Option<&dyn Fn(usize, usize) -> usize>,
) -> Result<GaugeFixErrorSet> {
    let code = rep.code();
    let size = code.order();
    let mut problems = Vec::new();
    if base.len() != size {
        problems.push(format!("expected {size} base errors, got {}", base.len()));
    }
    for (chi, e) in base.iter().enumerate() {
        match code.sector(e) {
            Ok(s) if s.index() == chi => {}
            Ok(s) => problems
                .push(format!("base error {e} lies in sector {s}, expected {}", Character::from_index(code.m(), chi))),
            Err(err) => problems.push(err.to_string()),
        }
    }
    if base.first().is_some_and(|e| !e.is_identity()) {
        problems.push(format!("first base error must be I, got {}", base[0]));
    }
    let h = h.unwrap_or(&default_bijection);
    let mut bijection = vec![vec![0usize; size]; size];
    for g in 0..size {
        let column: Vec<usize> = (0..size).map(|chi| h(chi, g)).collect();
        let mut seen = vec![false; size];
        if column.iter().any(|&t| t >= size || std::mem::replace(&mut seen[t], true)) {
            problems.push(format!("h(·, {}) is not a bijection", GroupElement::from_index(code.m(), g)));
        }
        for (row, &t) in bijection.iter_mut().zip(&column) {
            row[g] = t;
        }
        if column[0] != g {
            problems.push(format!("h(1, {0}) must equal {0}", GroupElement::from_index(code.m(), g)));
        }
    }
    if !problems.is_empty() {
        return Err(Error::Invalid(problems.join("; ")));
    }
    let mats = rep.matrices()?;
    let projectors: Vec<DenseOperator> = (0..size).map(|g| dual_projector_from(&mats, g)).collect();
    let pi = stabilizer::code_projector(code)?;
    let errs = base.iter().map(dense::pauli_matrix).collect::<Result<Vec<_>>>()?;
    let scale = c((size as f64).sqrt(), 0.0);
    let dim = pi.nrows();
    let unitaries = (0..size)
        .map(|g| {
            let mut e = DenseOperator::zeros(dim, dim);
            for chi in 0..size {
                e += &projectors[bijection[chi][g]] * &pi * &errs[chi];
            }
            e * scale
        })
        .collect();
    Ok(GaugeFixErrorSet { code: code.clone(), projectors, unitaries, bijection })
}

/// Per-identity deviations for a gauge-fixing error set.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GaugeFixReport {
    pub unitarity: f64,
    pub restriction: f64,
    pub diagonal_kl: f64,
    pub full_kl: f64,
    pub projector_orthogonality: f64,
    pub code_overlap: f64,
}

impl GaugeFixReport {
    pub fn max(&self) -> f64 {
        [
            self.unitarity,
            self.restriction,
            self.diagonal_kl,
            self.full_kl,
            self.projector_orthogonality,
            self.code_overlap,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl GaugeFixErrorSet {
    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn projector(&self, g: usize) -> &DenseOperator {
        &self.projectors[g]
    }

    pub fn unitary(&self, g: usize) -> &DenseOperator {
        &self.unitaries[g]
    }

    pub fn order(&self) -> usize {
        self.projectors.len()
    }

    /// `h(χ, g)`.
    pub fn bijection(&self, chi: usize, g: usize) -> usize {
        self.bijection[chi][g]
    }

    /// Checks unitarity, `Ê_g Π = √|G| P̂_g Π`, both KL forms, projector
    /// orthogonality and `Π Ê_g Π = |G|^{-1/2} Π`.
    pub fn verify(&self) -> Result<GaugeFixReport> {
        let pi = stabilizer::code_projector(&self.code)?;
        let size = self.order();
        let root = (size as f64).sqrt();
        let dim = pi.nrows();
        let zero = DenseOperator::zeros(dim, dim);
        let mut r = GaugeFixReport {
            unitarity: 0.0,
            restriction: 0.0,
            diagonal_kl: 0.0,
            full_kl: 0.0,
            projector_orthogonality: 0.0,
            code_overlap: 0.0,
        };
        for g in 0..size {
            let e = &self.unitaries[g];
            r.unitarity = r.unitarity.max(dense::unitarity_deviation(e));
            r.restriction =
                r.restriction.max(dense::max_abs_diff(&(e * &pi), &(&self.projectors[g] * &pi * c(root, 0.0))));
            r.code_overlap = r.code_overlap.max(dense::max_abs_diff(&(&pi * e * &pi), &(&pi / c(root, 0.0))));
            for h in 0..size {
                let (dkl, fkl, orth) = if g == h {
                    (&pi / c(size as f64, 0.0), pi.clone(), self.projectors[g].clone())
                } else {
                    (zero.clone(), zero.clone(), zero.clone())
                };
                let pp = &self.projectors[g] * &self.projectors[h];
                r.projector_orthogonality = r.projector_orthogonality.max(dense::max_abs_diff(&pp, &orth));
                r.diagonal_kl = r.diagonal_kl.max(dense::max_abs_diff(&(&pi * &pp * &pi), &dkl));
                let ee = &pi * e.adjoint() * &self.unitaries[h] * &pi;
                r.full_kl = r.full_kl.max(dense::max_abs_diff(&ee, &fkl));
            }
        }
        Ok(r)
    }

    /// Squared weight of `state` in each dual isotype `P̂_g`.
    pub fn dual_weights(&self, state: &DenseState) -> Vec<f64> {
        self.projectors.iter().map(|p| (p * state).norm_squared()).collect()
    }

    /// The unique `g` with `P̂_g |ψ⟩ ≈ |ψ⟩`.
    pub fn dual_syndrome(&self, state: &DenseState, tol: f64) -> Result<GroupElement> {
        let total = state.norm_squared();
        let weights = self.dual_weights(state);
        let hits: Vec<usize> =
            (0..weights.len()).filter(|&g| (weights[g] - total).abs() <= tol * total.max(1.0)).collect();
        match hits.as_slice() {
            [g] => Ok(GroupElement::from_index(self.code.m(), *g)),
            _ => Err(Error::AmbiguousSector(format!(
                "dual weights {}",
                weights.iter().map(|w| format!("{w:.3e}")).collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    /// Operation elements `Ê_g† P̂_g`.
    pub fn recovery_kraus(&self) -> Vec<DenseOperator> {
        self.unitaries.iter().zip(&self.projectors).map(|(e, p)| e.adjoint() * p).collect()
    }

    /// `O(ρ) = Σ_g Ê_g† P̂_g ρ P̂_g Ê_g`.
    pub fn dual_recovery(&self, rho: &DenseOperator) -> DenseOperator {
        apply_kraus(&self.recovery_kraus(), rho)
    }

    /// `Σ_g P̂_g ρ P̂_g`.
    pub fn dual_charge_measurement(&self, rho: &DenseOperator) -> DenseOperator {
        apply_kraus(&self.projectors, rho)
    }
}

/// `Σ_i K_i ρ K_i†`.
pub fn apply_kraus(kraus: &[DenseOperator], rho: &DenseOperator) -> DenseOperator {
    let mut out = DenseOperator::zeros(rho.nrows(), rho.ncols());
    for k in kraus {
        out += k * rho * k.adjoint();
    }
    out
}

/// `Ê_g Π` for every `g`, as `|G|^{-1/2} Σ_χ χ(g) Û^χ Π`.
pub fn induced_dual_restrictions(rep: &DualRep) -> Result<Vec<DenseOperator>> {
    let pi = stabilizer::code_projector(rep.code())?;
    let mats = rep.matrices()?;
    let size = mats.len();
    let root = (size as f64).sqrt();
    Ok((0..size).map(|g| dual_projector_from(&mats, g) * &pi * c(root, 0.0)).collect())
}

/// Electric recovery `Σ_χ E_χ† P_χ ρ P_χ E_χ` for errors indexed by sector.
pub fn electric_recovery(
    code: &StabilizerCode,
    errors: &[PauliOperator],
    rho: &DenseOperator,
) -> Result<DenseOperator> {
    if errors.len() != code.order() {
        return Err(Error::Dimension { expected: code.order(), got: errors.len() });
    }
    let kraus = errors
        .iter()
        .enumerate()
        .map(|(chi, e)| {
            let p = stabilizer::isotype_projector(code, &Character::from_index(code.m(), chi))?;
            Ok(dense::pauli_matrix(&e.dagger())? * p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(apply_kraus(&kraus, rho))
}

/// `Σ_χ P_χ ρ P_χ`.
pub fn charge_measurement(code: &StabilizerCode, rho: &DenseOperator) -> Result<DenseOperator> {
    let projectors = Character::all(code.m())
        .iter()
        .map(|chi| stabilizer::isotype_projector(code, chi))
        .collect::<Result<Vec<_>>>()?;
    Ok(apply_kraus(&projectors, rho))
}

/// `|G|^{-1} Σ_g U^g ρ U^g`.
pub fn stabilizer_twirl(code: &StabilizerCode, rho: &DenseOperator) -> Result<DenseOperator> {
    let mats = code.group_table().iter().map(dense::pauli_matrix).collect::<Result<Vec<_>>>()?;
    Ok(apply_kraus(&mats, rho) / c(code.order() as f64, 0.0))
}

/// `|Ĝ|^{-1} Σ_χ Û^χ ρ Û^χ`.
pub fn dual_twirl(rep: &DualRep, rho: &DenseOperator) -> Result<DenseOperator> {
    let mats = rep.matrices()?;
    let size = mats.len() as f64;
    Ok(apply_kraus(&mats, rho) / c(size, 0.0))
}

/// Largest deviation from `I/dim` after twirling the definite-charge mixed
/// states `|G| P̂_g / dim` by `U` and `|G| P_χ / dim` by `Û`.
pub fn complementarity_deviation(rep: &DualRep) -> Result<f64> {
    let code = rep.code();
    let size = code.order() as f64;
    let mats = rep.matrices()?;
    let dim = mats[0].nrows();
    let mixed = DenseOperator::identity(dim, dim) / c(dim as f64, 0.0);
    let scale = c(size / dim as f64, 0.0);
    let mut worst = 0.0f64;
    for g in 0..code.order() {
        let psi = dual_projector_from(&mats, g) * scale;
        worst = worst.max(dense::max_abs_diff(&stabilizer_twirl(code, &psi)?, &mixed));
    }
    for chi in Character::all(code.m()) {
        let psi = stabilizer::isotype_projector(code, &chi)? * scale;
        worst = worst.max(dense::max_abs_diff(&dual_twirl(rep, &psi)?, &mixed));
    }
    Ok(worst)
}

/// Mutual unbiasedness of the character and group bases of a factorization.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FourierReport {
    /// `⟨χ|g⟩` for all pairs (rows `χ`, columns `g`).
    pub overlaps: Vec<Vec<f64>>,
    /// Largest `| |⟨χ|g⟩| − |G|^{-1/2} |`.
    pub unbiasedness: f64,
    /// Largest deviation of `⟨g|h⟩ = δ_{gh}`.
    pub orthonormality: f64,
    /// Largest deviation of `P_χ P̂_g = χ(g)|G|^{-1/2} |χ⟩⟨g|` on the gauge factor.
    pub projector_product: f64,
    /// Largest deviation of `U^g P̂_h U^g = P̂_{gh}` for the physical `P̂_h`.
    pub covariance: f64,
}

impl FourierReport {
    pub fn max(&self) -> f64 {
        self.unbiasedness.max(self.orthonormality).max(self.projector_product).max(self.covariance)
    }
}

pub fn fourier_basis_relation(code: &StabilizerCode, fact: &NonlocalFactorization) -> Result<FourierReport> {
    let size = fact.order();
    let root = (size as f64).sqrt();
    let group: Vec<DenseState> = (0..size).map(|g| fact.group_basis_state(g)).collect();
    let chars: Vec<DenseState> = (0..size).map(|chi| basis_vector(size, chi)).collect();
    let mut overlaps = vec![vec![0.0; size]; size];
    let (mut unbiasedness, mut orthonormality, mut projector_product) = (0.0f64, 0.0f64, 0.0f64);
    for chi in 0..size {
        for g in 0..size {
            let o = dense::inner_product(&chars[chi], &group[g]);
            overlaps[chi][g] = o.re;
            unbiasedness = unbiasedness.max((o.norm() - root.recip()).abs());
            let lhs = dense::outer(&chars[chi], &chars[chi]) * dense::outer(&group[g], &group[g]);
            let rhs = dense::outer(&chars[chi], &group[g]) * c(chi_sign(chi, g) / root, 0.0);
            projector_product = projector_product.max(dense::max_abs_diff(&lhs, &rhs));
        }
    }
    for g in 0..size {
        for h in 0..size {
            let target = if g == h { 1.0 } else { 0.0 };
            orthonormality = orthonormality.max((dense::inner_product(&group[g], &group[h]) - c(target, 0.0)).norm());
        }
    }
    let covariance = if code.n() <= dense::MATRIX_CAP {
        let t = fact.t_matrix()?;
        let physical: Vec<DenseOperator> = group
            .iter()
            .map(|v| {
                let local = dense::outer(v, v);
                let lifted = DenseOperator::from_fn(t.nrows(), t.ncols(), |r, col| {
                    if r / size == col / size {
                        local[(r % size, col % size)]
                    } else {
                        c(0.0, 0.0)
                    }
                });
                t.adjoint() * lifted * &t
            })
            .collect();
        let mut worst = 0.0f64;
        for i in 0..code.m() {
            let u = dense::pauli_matrix(&code.generators()[i])?;
            for (h, p) in physical.iter().enumerate() {
                worst = worst.max(dense::max_abs_diff(&(&u * p * &u), &physical[h ^ (1 << i)]));
            }
        }
        worst
    } else {
        0.0
    };
    Ok(FourierReport { overlaps, unbiasedness, orthonormality, projector_product, covariance })
}

fn basis_vector(dim: usize, i: usize) -> DenseState {
    let mut v = DenseState::zeros(dim);
    v[i] = c(1.0, 0.0);
    v
}

/// Smallest eigenvalue of `I − 2^{n−k} Π`.
pub fn blanket_recovery_min_eigenvalue(code: &StabilizerCode) -> Result<f64> {
    let pi = stabilizer::code_projector(code)?;
    let dim = pi.nrows();
    let m = DenseOperator::identity(dim, dim) - &pi * c(code.order() as f64, 0.0);
    let eig = m.symmetric_eigen();
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Fidelity `⟨ψ|ρ|ψ⟩` of a density operator with a pure state.
pub fn fidelity(psi: &DenseState, rho: &DenseOperator) -> f64 {
    let v: C64 = (psi.adjoint() * rho * psi)[(0, 0)];
    v.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qrf_local::SeedBasis;
    use crate::stabilizer::build_code;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn three() -> StabilizerCode {
        build_code(3, vec![p("ZZI"), p("IZZ")]).unwrap()
    }

    fn strings(rep: &DualRep) -> Vec<String> {
        rep.as_paulis().unwrap().iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn x_basis_on_first_two_qubits() {
        let frame = LocalFrame::on_qubits(&three(), &[1, 2], &SeedBasis::X).unwrap();
        let rep = dual_rep_from_basis(&frame).unwrap();
        let mut s = strings(&rep);
        s.sort();
        assert_eq!(s, ["III", "IXI", "XII", "XXI"]);
        assert!(check_duality(&three(), &rep, 1e-10).unwrap().passed);
    }

    #[test]
    fn y_basis_gives_y_strings() {
        let frame = LocalFrame::on_qubits(&three(), &[1, 2], &SeedBasis::Y).unwrap();
        let mut s = strings(&dual_rep_from_basis(&frame).unwrap());
        s.sort();
        assert_eq!(s, ["III", "IYI", "YII", "YYI"]);
    }

    #[test]
    fn swapped_operators_break_weyl() {
        let code = three();
        let frame = LocalFrame::on_qubits(&code, &[1, 2], &SeedBasis::X).unwrap();
        let mut ops = dual_rep_from_basis(&frame).unwrap().as_paulis().unwrap();
        ops.swap(1, 2);
        let v = check_duality(&code, &DualRep::from_paulis(&code, ops).unwrap(), 1e-10).unwrap();
        assert!(!v.passed);
        assert_eq!(v.weyl_violation, Some((1, 1)));
    }

    #[test]
    fn trivial_group_dual_is_identity() {
        let code = build_code(2, vec![]).unwrap();
        let frame = LocalFrame::new(&code, None, &SeedBasis::X).unwrap();
        assert_eq!(strings(&dual_rep_from_basis(&frame).unwrap()), ["II"]);
    }

    fn op(terms: &[(f64, &str)]) -> DenseOperator {
        let t: Vec<(C64, &str)> = terms.iter().map(|&(a, s)| (c(a, 0.0), s)).collect();
        dense::operator_from_text(&t).unwrap()
    }

    #[test]
    fn plus_plus_gauge_fix_matches_closed_forms() {
        let code = three();
        let frame = LocalFrame::on_qubits(&code, &[1, 2], &SeedBasis::X).unwrap();
        let rep = dual_rep_from_basis(&frame).unwrap();
        let base = rep.as_paulis().unwrap();
        // Bijection used for the closed form: X1 ↦ Z2Z3, X2 ↦ Z1Z3, X1X2 ↦ Z1Z2.
        let mut shift = [0usize; 4];
        for (e, g) in [("XII", "IZZ"), ("IXI", "ZIZ"), ("XXI", "ZZI")] {
            shift[code.sector(&p(e)).unwrap().index()] = code.element_of(&p(g)).unwrap().0;
        }
        let h = move |chi: usize, g: usize| g ^ shift[chi];
        let set = gauge_fix_errors(&rep, &base, Some(&h)).unwrap();
        let p = op(&[(0.25, "III"), (0.25, "XII"), (0.25, "IXI"), (0.25, "XXI")]);
        assert!(dense::max_abs_diff(set.projector(0), &p) < 1e-12);
        let e = op(&[(0.5, "III"), (-0.5, "YYI"), (0.5, "ZXZ"), (0.5, "XZZ")]);
        assert!(dense::max_abs_diff(set.unitary(0), &e) < 1e-12);
        assert!(set.verify().unwrap().max() < 1e-12);
        let default = gauge_fix_errors(&rep, &base, None).unwrap();
        assert!(default.verify().unwrap().max() < 1e-12);
    }

    #[test]
    fn frame_field_dual_rep_matches_closed_form() {
        use crate::error_frames::{build_factorization, frame_fields_from_errors};
        let code = three();
        let errors: Vec<PauliOperator> = ["III", "XII", "IXI", "IIX"].iter().map(|s| p(s)).collect();
        let fields = frame_fields_from_errors(&code, &errors).unwrap();
        let rep = dual_rep_from_frame_fields(&fields).unwrap();
        let chi2 = code.sector(&p("XII")).unwrap().index();
        // X2X3Z2Z3 = (−iY2)(−iY3) = −Y2Y3.
        let expected = op(&[(0.5, "XII"), (0.5, "IXX"), (0.5, "XZZ"), (0.5, "IYY")]);
        assert!(dense::max_abs_diff(&rep.op(chi2).matrix().unwrap(), &expected) < 1e-12);
        assert!(check_duality(&code, &rep, 1e-10).unwrap().passed);
        let fact = build_factorization(&code, fields.fields()).unwrap();
        let via_t = dual_rep_from_factorization(&code, &fact).unwrap();
        for chi in 0..4 {
            assert!(dense::max_abs_diff(&via_t.op(chi).matrix().unwrap(), &rep.op(chi).matrix().unwrap()) < 1e-12);
        }
        let pi = stabilizer::code_projector(&code).unwrap();
        let restrictions = induced_dual_restrictions(&rep).unwrap();
        let e = op(&[(0.5, "III"), (0.5, "XII"), (0.5, "IXI"), (0.5, "IIX")]) * &pi;
        assert!(dense::max_abs_diff(&restrictions[0], &e) < 1e-12);
    }

    #[test]
    fn blanket_recovery_is_not_positive() {
        let v = blanket_recovery_min_eigenvalue(&three()).unwrap();
        assert!((v + 3.0).abs() < 1e-10);
    }
}
