//! Knill–Laflamme checks, maximal error sets, frame fields and the
//! error-generated tensor factorization.

use crate::dense::{self, c, DenseOperator, DenseState, C64, MATRIX_CAP};
use crate::error::{Error, Result};
use crate::gf2::{coset_canonical, BitVec};
use crate::group::{chi_sign, Character};
use crate::pauli::{all_strings_by_key, PauliOperator};
use crate::stabilizer::{self, StabilizerCode};

/// Largest `n` for which factorizations are materialised.
pub const FACTORIZATION_CAP: usize = 10;

/// Outcome of a Knill–Laflamme check on a list of Pauli errors.
#[derive(Clone, Debug)]
pub struct KlReport {
    /// `C_ij` with `Π E_i† E_j Π = C_ij Π`; zero where no such scalar exists.
    pub c: DenseOperator,
    pub correctable: bool,
    /// Pairs `i < j` whose product `E_i† E_j` is a non-trivial logical operator.
    pub violations: Vec<(usize, usize)>,
    /// Pairs `i < j` with equal syndrome.
    pub same_sector: Vec<(usize, usize)>,
    /// Pairs `i < j` with `E_i† E_j ∈ G` at phase +1, i.e. `E_i Π = E_j Π`.
    pub duplicates: Vec<(usize, usize)>,
    pub sectors: Vec<Character>,
}

impl KlReport {
    /// Indices kept after removing exact duplicates.
    pub fn deduplicated(&self) -> Vec<usize> {
        (0..self.sectors.len()).filter(|&j| !self.duplicates.iter().any(|&(i, jj)| jj == j && i < j)).collect()
    }
}

/// Exact Pauli-level check of `Π E_i† E_j Π ∝ Π`.
pub fn kl_check(code: &StabilizerCode, errors: &[PauliOperator]) -> Result<KlReport> {
    for e in errors {
        if e.n() != code.n() {
            return Err(Error::Dimension { expected: code.n(), got: e.n() });
        }
    }
    let len = errors.len();
    let sectors = errors.iter().map(|e| code.sector(e)).collect::<Result<Vec<_>>>()?;
    let mut cm = DenseOperator::zeros(len, len);
    let (mut violations, mut same_sector, mut duplicates) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..len {
        for j in 0..len {
            if sectors[i] != sectors[j] {
                continue;
            }
            let prod = errors[i].dagger().multiply(&errors[j])?;
            match code.element_of(&prod) {
                Some((_, s)) => {
                    cm[(i, j)] = dense::i_pow(s as usize);
                    if i < j && s == 0 {
                        duplicates.push((i, j));
                    }
                }
                None if i < j => violations.push((i, j)),
                None => {}
            }
            if i < j {
                same_sector.push((i, j));
            }
        }
    }
    Ok(KlReport { c: cm, correctable: violations.is_empty(), violations, same_sector, duplicates, sectors })
}

/// Knill–Laflamme check for general dense operators.
#[derive(Clone, Debug)]
pub struct DenseKlReport {
    pub c: DenseOperator,
    pub correctable: bool,
    pub violations: Vec<(usize, usize)>,
    pub max_residual: f64,
}

pub fn kl_check_dense(code: &StabilizerCode, errors: &[DenseOperator], tol: f64) -> Result<DenseKlReport> {
    let pi = stabilizer::code_projector(code)?;
    let d = (1usize << code.k()) as f64;
    let len = errors.len();
    let mut cm = DenseOperator::zeros(len, len);
    let mut violations = Vec::new();
    let mut max_residual = 0.0f64;
    for i in 0..len {
        for j in 0..len {
            let m = &pi * errors[i].adjoint() * &errors[j] * &pi;
            let cij = m.trace() / c(d, 0.0);
            let residual = dense::max_abs_diff(&m, &(&pi * cij));
            cm[(i, j)] = cij;
            max_residual = max_residual.max(residual);
            if residual > tol && i <= j {
                violations.push((i, j));
            }
        }
    }
    Ok(DenseKlReport { c: cm, correctable: violations.is_empty(), violations, max_residual })
}

/// One Pauli per sector, indexed by sector, starting from `I` and the seeds
/// and filling the remaining sectors with the lowest-key string.
pub fn build_maximal_error_set(code: &StabilizerCode, seeds: &[PauliOperator]) -> Result<Vec<PauliOperator>> {
    let n = code.n();
    let mut slots: Vec<Option<PauliOperator>> = vec![None; code.order()];
    slots[0] = Some(PauliOperator::identity(n));
    for s in seeds {
        if s.n() != n {
            return Err(Error::Dimension { expected: n, got: s.n() });
        }
        if s.unsigned().is_identity() {
            continue;
        }
        let chi = code.sector(s)?.index();
        if let Some(existing) = &slots[chi] {
            return Err(Error::NotCorrectable(format!("seed {s} shares sector {} with {existing}", code.sector(s)?)));
        }
        slots[chi] = Some(s.clone());
    }
    let mut missing = slots.iter().filter(|s| s.is_none()).count();
    if missing > 0 {
        // Walk strings in key order; for large n this is the dominant cost.
        for p in all_strings_by_key(n) {
            let chi = code.sector(&p)?.index();
            if slots[chi].is_none() {
                slots[chi] = Some(p);
                missing -= 1;
                if missing == 0 {
                    break;
                }
            }
        }
    }
    Ok(slots.into_iter().map(|s| s.expect("every sector is populated")).collect())
}

/// Canonical label of the span of `E Π`: the stabilizer coset of `E`, phase ignored.
fn coset_label(code: &StabilizerCode, e: &PauliOperator) -> Result<BitVec> {
    coset_canonical(&e.symplectic(), &code.generator_matrix())
}

/// Whether `span{E Π : E ∈ a} = span{E Π : E ∈ b}`, decided through
/// stabilizer cosets.
pub fn equivalent(code: &StabilizerCode, a: &[PauliOperator], b: &[PauliOperator]) -> Result<bool> {
    let mut la = a.iter().map(|e| coset_label(code, e)).collect::<Result<Vec<_>>>()?;
    let mut lb = b.iter().map(|e| coset_label(code, e)).collect::<Result<Vec<_>>>()?;
    let key = |v: &BitVec| v.to_string();
    la.sort_by_key(key);
    la.dedup();
    lb.sort_by_key(key);
    lb.dedup();
    Ok(la == lb)
}

/// Dense version of [`equivalent`] for arbitrary operators.
pub fn equivalent_dense(code: &StabilizerCode, a: &[DenseOperator], b: &[DenseOperator], tol: f64) -> Result<bool> {
    let pi = stabilizer::code_projector(code)?;
    let flatten = |ops: &[DenseOperator]| -> Vec<DenseState> {
        ops.iter().map(|e| DenseState::from_iterator(e.len(), (e * &pi).iter().copied())).collect()
    };
    let (va, vb) = (flatten(a), flatten(b));
    let ra = dense::span_rank(&va, tol);
    let rb = dense::span_rank(&vb, tol);
    let joint: Vec<DenseState> = va.into_iter().chain(vb).collect();
    Ok(ra == rb && dense::span_rank(&joint, tol) == ra)
}

/// `dim span{E_i Π E_j†}`.
pub fn frame_algebra_dim(code: &StabilizerCode, errors: &[PauliOperator]) -> Result<usize> {
    dense::check_cap(code.n(), MATRIX_CAP)?;
    let pi = stabilizer::code_projector(code)?;
    let mats = errors.iter().map(dense::pauli_matrix).collect::<Result<Vec<_>>>()?;
    let mut vectors = Vec::with_capacity(mats.len() * mats.len());
    for ei in &mats {
        for ej in &mats {
            let m = ei * &pi * ej.adjoint();
            vectors.push(DenseState::from_iterator(m.len(), m.iter().copied()));
        }
    }
    Ok(dense::span_rank(&vectors, 1e-9))
}

/// A complete set of frame fields `R_χ = η_χ E_χ|_{ℋ_pn}`, indexed by sector.
#[derive(Clone, Debug)]
pub struct FrameFields {
    code: StabilizerCode,
    errors: Vec<PauliOperator>,
}

/// Orders a maximal error set containing `I` by sector.
pub fn frame_fields_from_errors(code: &StabilizerCode, errors: &[PauliOperator]) -> Result<FrameFields> {
    let mut slots: Vec<Option<PauliOperator>> = vec![None; code.order()];
    for e in errors {
        let chi = code.sector(e)?;
        let slot = &mut slots[chi.index()];
        if let Some(prev) = slot {
            return Err(Error::NotMaximal(format!("{prev} and {e} share sector {chi}")));
        }
        *slot = Some(e.clone());
    }
    if let Some(chi) = slots.iter().position(|s| s.is_none()) {
        return Err(Error::NotMaximal(format!("no error in sector {}", Character::from_index(code.m(), chi))));
    }
    let errors: Vec<PauliOperator> = slots.into_iter().map(Option::unwrap).collect();
    if !errors[0].is_identity() {
        return Err(Error::NotMaximal(format!("trivial-sector error must be I, got {}", errors[0])));
    }
    Ok(FrameFields { code: code.clone(), errors })
}

impl FrameFields {
    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    /// `η_χ E_χ` for sector index `chi`.
    pub fn field(&self, chi: usize) -> &PauliOperator {
        &self.errors[chi]
    }

    pub fn fields(&self) -> &[PauliOperator] {
        &self.errors
    }

    /// Fields conjugated by `U^g`, i.e. `R_χ ↦ U^g R_χ U^{g†} = χ(g) R_χ`.
    pub fn gauge_transformed(&self, g: usize) -> Result<FrameFields> {
        let u = self.code.element(g);
        let errors = self.errors.iter().map(|e| u.multiply(e)?.multiply(&u.dagger())).collect::<Result<Vec<_>>>()?;
        Ok(FrameFields { code: self.code.clone(), errors })
    }

    /// Operation elements `K_χ = Π E_χ† P_χ`, with `K_1 = Π`.
    pub fn dressing_kraus(&self) -> Result<Vec<DenseOperator>> {
        let pi = stabilizer::code_projector(&self.code)?;
        (0..self.code.order())
            .map(|chi| {
                let p = stabilizer::isotype_projector(&self.code, &Character::from_index(self.code.m(), chi))?;
                Ok(&pi * dense::pauli_matrix(&self.errors[chi].dagger())? * p)
            })
            .collect()
    }

    /// `O_R(ρ) = Σ_χ K_χ ρ K_χ†`.
    pub fn dressing_recovery(&self, rho: &DenseOperator) -> Result<DenseOperator> {
        let dim = rho.nrows();
        let mut out = DenseOperator::zeros(dim, dim);
        for k in self.dressing_kraus()? {
            out += &k * rho * k.adjoint();
        }
        Ok(out)
    }
}

/// The factorization `ℋ_kin ≅ ℋ_pn ⊗ ℋ_gauge` generated by one error per sector.
///
/// Column `j·|G| + χ` of `t†` is `E_χ |j̄⟩`.
#[derive(Clone, Debug)]
pub struct NonlocalFactorization {
    code: StabilizerCode,
    representatives: Vec<PauliOperator>,
    columns: Vec<DenseState>,
}

/// One row of the basis identification table.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FactorizationEntry {
    pub logical: usize,
    pub character: String,
    pub error: String,
    pub image: Vec<(String, [f64; 2])>,
}

/// Builds the factorization from representatives indexed by sector.
pub fn build_factorization(code: &StabilizerCode, representatives: &[PauliOperator]) -> Result<NonlocalFactorization> {
    dense::check_cap(code.n(), FACTORIZATION_CAP)?;
    if representatives.len() != code.order() {
        return Err(Error::NotMaximal(format!(
            "expected {} representatives, got {}",
            code.order(),
            representatives.len()
        )));
    }
    for (chi, e) in representatives.iter().enumerate() {
        if code.sector(e)?.index() != chi {
            return Err(Error::NotMaximal(format!("{e} is not in sector {}", Character::from_index(code.m(), chi))));
        }
    }
    let words = stabilizer::codewords(code)?;
    let mut columns = Vec::with_capacity(words.len() * representatives.len());
    for w in &words {
        for e in representatives {
            columns.push(dense::apply_pauli(e, w)?);
        }
    }
    Ok(NonlocalFactorization { code: code.clone(), representatives: representatives.to_vec(), columns })
}

impl NonlocalFactorization {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[PauliOperator] {
        &self.representatives
    }

    /// `t† (|j⟩ ⊗ |χ⟩)`.
    pub fn column(&self, j: usize, chi: usize) -> &DenseState {
        &self.columns[j * self.order() + chi]
    }

    /// `t |ψ⟩` as coefficients over `|j⟩ ⊗ |χ⟩`.
    pub fn apply(&self, state: &DenseState) -> DenseState {
        DenseState::from_iterator(self.columns.len(), self.columns.iter().map(|col| dense::inner_product(col, state)))
    }

    /// Largest entry of `t t† − I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, ca) in self.columns.iter().enumerate() {
            for (b, cb) in self.columns.iter().enumerate().skip(a) {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dense::inner_product(ca, cb) - c(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Largest deviation of `U^g t†(|j⟩⊗|χ⟩) = χ(g) t†(|j⟩⊗|χ⟩)` over generators.
    pub fn covariance_deviation(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (i, s) in self.code.generators().iter().enumerate() {
            for (idx, col) in self.columns.iter().enumerate() {
                let chi = idx % self.order();
                let sign = chi_sign(chi, 1 << i);
                worst = worst.max(dense::max_abs_diff_state(&dense::apply_pauli(s, col)?, &(col * c(sign, 0.0))));
            }
        }
        Ok(worst)
    }

    /// Full matrix `t` (rows indexed by `j·|G| + χ`).
    pub fn t_matrix(&self) -> Result<DenseOperator> {
        dense::check_cap(self.code.n(), MATRIX_CAP)?;
        let dim = self.columns.len();
        let mut t_dag = DenseOperator::zeros(dim, dim);
        for (j, col) in self.columns.iter().enumerate() {
            t_dag.set_column(j, col);
        }
        Ok(t_dag.adjoint())
    }

    /// `|g⟩ = |G|^{-1/2} Σ_χ χ(g) |χ⟩` in the gauge factor.
    pub fn group_basis_state(&self, g: usize) -> DenseState {
        let size = self.order();
        let scale = (size as f64).sqrt().recip();
        DenseState::from_iterator(size, (0..size).map(|chi| c(chi_sign(chi, g) * scale, 0.0)))
    }

    /// `U_R^g = diag(χ(g))` on the gauge factor in the character basis.
    pub fn gauge_representation(&self, g: usize) -> DenseOperator {
        let size = self.order();
        DenseOperator::from_diagonal(&DenseState::from_iterator(size, (0..size).map(|chi| c(chi_sign(chi, g), 0.0))))
    }

    /// Identification table `|j̄⟩ ⊗ |χ⟩ ≡ E_χ |j̄⟩` with sparse images.
    pub fn table(&self, tol: f64) -> Vec<FactorizationEntry> {
        let n = self.code.n();
        let mut out = Vec::with_capacity(self.columns.len());
        for (idx, col) in self.columns.iter().enumerate() {
            let (j, chi) = (idx / self.order(), idx % self.order());
            let image = col
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm() > tol)
                .map(|(b, a)| (format!("{:0width$b}", b, width = n), [a.re, a.im]))
                .collect();
            out.push(FactorizationEntry {
                logical: j,
                character: Character::from_index(self.code.m(), chi).label(),
                error: self.representatives[chi].to_string(),
                image,
            });
        }
        out
    }

    /// Whether `t E |j̄⟩ = |j⟩ ⊗ |a⟩` for one gauge vector `a` shared by all `j`.
    pub fn acts_on_gauge_only(&self, e: &PauliOperator, tol: f64) -> Result<bool> {
        let words = stabilizer::codewords(&self.code)?;
        let size = self.order();
        let mut shared: Option<Vec<C64>> = None;
        for (j, w) in words.iter().enumerate() {
            let coeffs = self.apply(&dense::apply_pauli(e, w)?);
            for (idx, v) in coeffs.iter().enumerate() {
                if idx / size != j && v.norm() > tol {
                    return Ok(false);
                }
            }
            let a: Vec<C64> = (0..size).map(|chi| coeffs[j * size + chi]).collect();
            match &shared {
                None => shared = Some(a),
                Some(prev) => {
                    if prev.iter().zip(&a).any(|(x, y)| (x - y).norm() > tol) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Factorization generated by `errors`: the first error of each sector is its
/// representative and empty sectors take the lowest-key string.
pub fn factorization_from_list(code: &StabilizerCode, errors: &[PauliOperator]) -> Result<NonlocalFactorization> {
    let mut slots: Vec<Option<PauliOperator>> = vec![None; code.order()];
    for e in errors {
        let chi = code.sector(e)?.index();
        if slots[chi].is_none() {
            slots[chi] = Some(e.clone());
        }
    }
    if slots.iter().any(|s| s.is_none()) {
        let fill = build_maximal_error_set(code, &[])?;
        for (chi, slot) in slots.iter_mut().enumerate() {
            if slot.is_none() {
                *slot = Some(fill[chi].clone());
            }
        }
    }
    let reps: Vec<PauliOperator> = slots.into_iter().map(Option::unwrap).collect();
    build_factorization(code, &reps)
}

/// Whether every error acts only on the gauge factor of the factorization it
/// generates; equivalent to the KL condition for Pauli sets.
pub fn factorized_action_is_gauge_only(code: &StabilizerCode, errors: &[PauliOperator], tol: f64) -> Result<bool> {
    let fact = factorization_from_list(code, errors)?;
    for e in errors {
        if !fact.acts_on_gauge_only(e, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::build_code;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn ps(list: &[&str]) -> Vec<PauliOperator> {
        list.iter().map(|s| p(s)).collect()
    }

    fn three() -> StabilizerCode {
        build_code(3, vec![p("ZZI"), p("IZZ")]).unwrap()
    }

    #[test]
    fn single_flips_have_identity_c() {
        let r = kl_check(&three(), &ps(&["III", "XII", "IXI", "IIX"])).unwrap();
        assert!(r.correctable);
        assert!(dense::max_abs_diff(&r.c, &DenseOperator::identity(4, 4)) < 1e-15);
    }

    #[test]
    fn shared_sector_with_logical_product_is_reported() {
        let r = kl_check(&three(), &ps(&["III", "IIX", "XXI"])).unwrap();
        assert_eq!(r.same_sector, vec![(1, 2)]);
        assert_eq!(r.violations, vec![(1, 2)]);
        assert!(!r.correctable);
    }

    #[test]
    fn logical_insertion_fails() {
        let r = kl_check(&three(), &ps(&["III", "XII", "ZII"])).unwrap();
        assert_eq!(r.violations, vec![(0, 2)]);
    }

    #[test]
    fn stabilizer_multiples_are_duplicates() {
        let r = kl_check(&three(), &ps(&["XII", "YZI"])).unwrap();
        // X1 · Y1Z2 = iZ1Z2, a stabilizer up to phase i.
        assert!(r.correctable);
        assert!(r.duplicates.is_empty());
        assert_eq!(r.c[(0, 1)], c(0.0, 1.0));
        let r = kl_check(&three(), &ps(&["XII", "XZZ"])).unwrap();
        assert_eq!(r.duplicates, vec![(0, 1)]);
        assert_eq!(r.deduplicated(), vec![0]);
    }

    #[test]
    fn maximal_set_for_three_qubits() {
        let set = build_maximal_error_set(&three(), &[]).unwrap();
        let names: Vec<String> = set.iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["III", "XII", "IIX", "IXI"]);
        assert!(build_maximal_error_set(&three(), &ps(&["IIX", "XXI"])).is_err());
    }

    #[test]
    fn equivalence_follows_cosets() {
        let code = three();
        assert!(equivalent(&code, &ps(&["III", "XII"]), &ps(&["III", "XII"])).unwrap());
        assert!(equivalent(&code, &ps(&["III", "XII"]), &ps(&["III", "-XZZ"])).unwrap());
        assert!(!equivalent(&code, &ps(&["III", "XII"]), &ps(&["III", "YII"])).unwrap());
    }

    #[test]
    fn frame_algebra_has_full_dimension() {
        let code = three();
        assert_eq!(frame_algebra_dim(&code, &ps(&["III", "XII", "IXI", "IIX"])).unwrap(), 16);
    }
}
