//! Stabilizer codes: validation, group tables, sectors, projectors,
//! logical operators and the computational encoding.

use crate::dense::{self, c, DenseOperator, DenseState, MATRIX_CAP, STATE_CAP};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::group::{Character, GroupElement};
use crate::pauli::{all_strings_by_key, PauliOperator};

/// Group tables are cached up to this many generators.
pub const TABLE_CACHE_M: usize = 16;
/// Logical operators are found by exhaustive string search up to this `n`.
pub const LOGICAL_SEARCH_MAX_N: usize = 8;

/// Sector labels are characters of the stabilizer group.
pub type SectorLabel = Character;

/// A validated stabilizer code with exponent-indexed group elements.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    generators: Vec<PauliOperator>,
    table: Option<Vec<PauliOperator>>,
    logical_z: Vec<PauliOperator>,
    logical_x: Vec<PauliOperator>,
}

/// Validates `generators` and finds logical operators by deterministic search.
pub fn build_code(n: usize, generators: Vec<PauliOperator>) -> Result<StabilizerCode> {
    validate_generators(n, &generators)?;
    let (logical_z, logical_x) = find_logicals(n, &generators);
    Ok(StabilizerCode::assemble(n, generators, logical_z, logical_x))
}

/// Like [`build_code`] but with caller-supplied logical operators, which are
/// validated instead of searched for.
pub fn build_code_with_logicals(
    n: usize,
    generators: Vec<PauliOperator>,
    logical_z: Vec<PauliOperator>,
    logical_x: Vec<PauliOperator>,
) -> Result<StabilizerCode> {
    validate_generators(n, &generators)?;
    validate_logicals(n, &generators, &logical_z, &logical_x)?;
    Ok(StabilizerCode::assemble(n, generators, logical_z, logical_x))
}

fn validate_generators(n: usize, generators: &[PauliOperator]) -> Result<()> {
    if let Some(g) = generators.iter().find(|g| g.n() != n) {
        return Err(Error::Dimension { expected: n, got: g.n() });
    }
    if let Some(i) = generators.iter().position(|g| !g.is_hermitian()) {
        return Err(Error::NonHermitian(i + 1));
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            if !generators[i].commutes(&generators[j])? {
                return Err(Error::NonCommuting(i + 1, j + 1));
            }
        }
    }
    let rows = symplectic_matrix(n, generators);
    let relations = rows.transpose().kernel();
    if let Some(rel) = relations.first() {
        let mut product = PauliOperator::identity(n);
        for i in rel.ones() {
            product = product.multiply(&generators[i])?;
        }
        let members: Vec<String> = rel.ones().map(|i| format!("S{}", i + 1)).collect();
        if !product.is_identity() {
            return Err(Error::ScalarInGroup(format!("{} = {product}", members.join("·"))));
        }
        return Err(Error::DependentGenerators { rank: rows.rank(), count: generators.len() });
    }
    Ok(())
}

fn symplectic_matrix(n: usize, paulis: &[PauliOperator]) -> BitMatrix {
    BitMatrix::from_rows(2 * n, paulis.iter().map(|p| p.symplectic()).collect()).expect("uniform lengths")
}

fn validate_logicals(
    n: usize,
    generators: &[PauliOperator],
    logical_z: &[PauliOperator],
    logical_x: &[PauliOperator],
) -> Result<()> {
    let k = n - generators.len();
    if logical_z.len() != k || logical_x.len() != k {
        return Err(Error::InvalidLogicals(format!(
            "expected {k} logical Z and X operators, got {} and {}",
            logical_z.len(),
            logical_x.len()
        )));
    }
    for l in logical_z.iter().chain(logical_x) {
        if l.n() != n {
            return Err(Error::Dimension { expected: n, got: l.n() });
        }
        if !l.is_hermitian() {
            return Err(Error::InvalidLogicals(format!("{l} is not Hermitian")));
        }
        for (i, g) in generators.iter().enumerate() {
            if !l.commutes(g)? {
                return Err(Error::InvalidLogicals(format!("{l} anticommutes with generator {}", i + 1)));
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            let want = i != j;
            if logical_z[i].commutes(&logical_x[j])? != want {
                return Err(Error::InvalidLogicals(format!(
                    "Z{} and X{} must {}",
                    i + 1,
                    j + 1,
                    if want { "commute" } else { "anticommute" }
                )));
            }
            if i < j && (!logical_z[i].commutes(&logical_z[j])? || !logical_x[i].commutes(&logical_x[j])?) {
                return Err(Error::InvalidLogicals(format!("logicals {} and {} do not commute", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

/// Greedy search in key order: logical Z operators first, then matching X
/// partners. Large `n` uses symplectic Gram–Schmidt on the centralizer.
fn find_logicals(n: usize, generators: &[PauliOperator]) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
    let k = n - generators.len();
    if k == 0 {
        return (Vec::new(), Vec::new());
    }
    if n > LOGICAL_SEARCH_MAX_N {
        return symplectic_logicals(n, generators);
    }
    let stab_span = symplectic_matrix(n, generators);
    let candidates: Vec<PauliOperator> = all_strings_by_key(n)
        .into_iter()
        .filter(|p| generators.iter().all(|g| p.commutes(g).unwrap()))
        .filter(|p| stab_span.solve_combination(&p.symplectic()).unwrap().is_none())
        .collect();

    let mut zs: Vec<PauliOperator> = Vec::new();
    let mut span = stab_span.clone();
    for p in &candidates {
        if zs.len() == k {
            break;
        }
        if zs.iter().all(|z| p.commutes(z).unwrap()) && span.solve_combination(&p.symplectic()).unwrap().is_none() {
            span.push_row(p.symplectic()).unwrap();
            zs.push(p.clone());
        }
    }
    let mut xs: Vec<PauliOperator> = Vec::new();
    for i in 0..k {
        let found = candidates.iter().find(|p| {
            zs.iter().enumerate().all(|(j, z)| p.commutes(z).unwrap() == (i != j))
                && xs.iter().all(|x| p.commutes(x).unwrap())
        });
        xs.push(found.expect("a symplectic partner always exists").clone());
    }
    (zs, xs)
}

fn symplectic_form(a: &BitVec, b: &BitVec) -> bool {
    let n = a.len() / 2;
    let (ax, az) = (a.select(&(0..n).collect::<Vec<_>>()), a.select(&(n..2 * n).collect::<Vec<_>>()));
    let (bx, bz) = (b.select(&(0..n).collect::<Vec<_>>()), b.select(&(n..2 * n).collect::<Vec<_>>()));
    ax.dot(&bz) ^ az.dot(&bx)
}

fn symplectic_logicals(n: usize, generators: &[PauliOperator]) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
    // Centralizer = kernel of the swapped-generator matrix.
    let swapped: Vec<BitVec> = generators.iter().map(|g| g.z().concat(g.x())).collect();
    let constraint = BitMatrix::from_rows(2 * n, swapped).unwrap();
    let mut pool = constraint.kernel();
    let mut span = symplectic_matrix(n, generators);
    let (mut zs, mut xs) = (Vec::new(), Vec::new());
    while let Some(pos) = pool.iter().position(|v| span.solve_combination(v).unwrap().is_none()) {
        let a = pool.remove(pos);
        let Some(bpos) = pool.iter().position(|v| symplectic_form(&a, v)) else {
            continue;
        };
        let b = pool.remove(bpos);
        for v in pool.iter_mut() {
            let mut w = v.clone();
            if symplectic_form(v, &b) {
                w.xor_assign(&a);
            }
            if symplectic_form(v, &a) {
                w.xor_assign(&b);
            }
            *v = w;
        }
        span.push_row(a.clone()).unwrap();
        span.push_row(b.clone()).unwrap();
        zs.push(PauliOperator::from_symplectic(&a).unwrap());
        xs.push(PauliOperator::from_symplectic(&b).unwrap());
    }
    (zs, xs)
}

impl StabilizerCode {
    fn assemble(
        n: usize,
        generators: Vec<PauliOperator>,
        logical_z: Vec<PauliOperator>,
        logical_x: Vec<PauliOperator>,
    ) -> Self {
        let mut code = StabilizerCode { name: String::new(), n, generators, table: None, logical_z, logical_x };
        if code.m() <= TABLE_CACHE_M {
            code.table = Some((0..code.order()).map(|g| code.compute_element(g)).collect());
        }
        code
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators, `n − k`.
    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn k(&self) -> usize {
        self.n - self.m()
    }

    /// `|G| = 2^{n−k}`.
    pub fn order(&self) -> usize {
        1 << self.m()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    pub fn logical_x(&self) -> &[PauliOperator] {
        &self.logical_x
    }

    fn compute_element(&self, g: usize) -> PauliOperator {
        let mut u = PauliOperator::identity(self.n);
        for (i, s) in self.generators.iter().enumerate() {
            if (g >> i) & 1 == 1 {
                u = u.multiply(s).expect("same length");
            }
        }
        u
    }

    /// `U^g`, the ordered product of the generators selected by `g`.
    pub fn element(&self, g: usize) -> PauliOperator {
        match &self.table {
            Some(t) => t[g].clone(),
            None => self.compute_element(g),
        }
    }

    pub fn element_at(&self, g: &GroupElement) -> PauliOperator {
        self.element(g.index())
    }

    /// All group elements in index order.
    pub fn group_table(&self) -> Vec<PauliOperator> {
        match &self.table {
            Some(t) => t.clone(),
            None => (0..self.order()).map(|g| self.compute_element(g)).collect(),
        }
    }

    /// `(g, s)` with `p = i^s U^g`, if the string of `p` is in the group.
    pub fn element_of(&self, p: &PauliOperator) -> Option<(usize, u8)> {
        if p.n() != self.n {
            return None;
        }
        let coeffs = symplectic_matrix(self.n, &self.generators).solve_combination(&p.symplectic()).ok()??;
        let g = coeffs.ones().fold(0usize, |acc, i| acc | (1 << i));
        let u = self.element(g);
        Some((g, (p.phase_exp() + 4 - u.phase_exp()) % 4))
    }

    /// Whether `p` equals a group element including its phase.
    pub fn contains(&self, p: &PauliOperator) -> bool {
        matches!(self.element_of(p), Some((_, 0)))
    }

    /// Sector of `e`: bit `i` is set iff `e` anticommutes with generator `i`.
    pub fn sector(&self, e: &PauliOperator) -> Result<SectorLabel> {
        let mut bits = BitVec::zeros(self.m());
        for (i, s) in self.generators.iter().enumerate() {
            bits.set(i, !e.commutes(s)?);
        }
        Ok(Character(bits))
    }

    /// Commutes with every stabilizer but is not (up to phase) in the group.
    pub fn is_nontrivial_logical(&self, p: &PauliOperator) -> Result<bool> {
        Ok(self.sector(p)?.is_trivial() && self.element_of(p).is_none())
    }

    /// Symplectic matrix with one row per generator.
    pub fn generator_matrix(&self) -> BitMatrix {
        symplectic_matrix(self.n, &self.generators)
    }
}

/// `±1` per generator (or per listed 0-based generator index).
pub fn syndrome(code: &StabilizerCode, e: &PauliOperator, subset: Option<&[usize]>) -> Result<Vec<i32>> {
    if e.n() != code.n() {
        return Err(Error::Dimension { expected: code.n(), got: e.n() });
    }
    let all: Vec<usize> = (0..code.m()).collect();
    let indices = subset.unwrap_or(&all);
    indices
        .iter()
        .map(|&i| {
            let s = code.generators().get(i).ok_or(Error::IndexOutOfRange { index: i + 1, n: code.m() })?;
            Ok(if e.commutes(s)? { 1 } else { -1 })
        })
        .collect()
}

pub fn classify_sector(code: &StabilizerCode, e: &PauliOperator) -> Result<SectorLabel> {
    code.sector(e)
}

/// `Π = |G|^{-1} Σ_g U^g` as a full matrix.
pub fn code_projector(code: &StabilizerCode) -> Result<DenseOperator> {
    isotype_projector(code, &Character::zero(code.m()))
}

/// `P_χ = |G|^{-1} Σ_g χ(g) U^g` as a full matrix.
pub fn isotype_projector(code: &StabilizerCode, chi: &Character) -> Result<DenseOperator> {
    dense::check_cap(code.n(), MATRIX_CAP)?;
    if chi.m() != code.m() {
        return Err(Error::Dimension { expected: code.m(), got: chi.m() });
    }
    let dim = 1usize << code.n();
    let mut out = DenseOperator::zeros(dim, dim);
    for g in 0..code.order() {
        let sign = crate::group::chi_sign(chi.index(), g);
        out += dense::pauli_matrix(&code.element(g))? * c(sign, 0.0);
    }
    Ok(out / c(code.order() as f64, 0.0))
}

/// `P_χ |s⟩` computed as `Π_i (I + χ_i S_i)/2`.
pub fn apply_isotype_projector(code: &StabilizerCode, chi: &Character, s: &DenseState) -> Result<DenseState> {
    dense::check_cap(code.n(), STATE_CAP)?;
    if chi.m() != code.m() {
        return Err(Error::Dimension { expected: code.m(), got: chi.m() });
    }
    let mut out = s.clone();
    for (i, g) in code.generators().iter().enumerate() {
        let sign = if chi.bits().get(i) { -1.0 } else { 1.0 };
        let moved = dense::apply_pauli(g, &out)?;
        out = (out + moved * c(sign, 0.0)) * c(0.5, 0.0);
    }
    Ok(out)
}

pub fn apply_code_projector(code: &StabilizerCode, s: &DenseState) -> Result<DenseState> {
    apply_isotype_projector(code, &Character::zero(code.m()), s)
}

/// Basis codewords `|j̄⟩`, with logical qubit 1 as the most significant bit of `j`.
pub fn codewords(code: &StabilizerCode) -> Result<Vec<DenseState>> {
    let n = code.n();
    dense::check_cap(n, STATE_CAP)?;
    let mut zero = None;
    for b in 0..1usize << n {
        let mut v = dense::basis_state(n, b);
        for z in code.logical_z() {
            v = (&v + dense::apply_pauli(z, &v)?) * c(0.5, 0.0);
        }
        v = apply_code_projector(code, &v)?;
        let norm = v.norm();
        if norm > 1e-8 {
            zero = Some(v / c(norm, 0.0));
            break;
        }
    }
    let zero = zero.ok_or_else(|| Error::Invalid("code space is empty".into()))?;
    let k = code.k();
    (0..1usize << k)
        .map(|j| {
            let mut v = zero.clone();
            for (i, x) in code.logical_x().iter().enumerate() {
                if (j >> (k - 1 - i)) & 1 == 1 {
                    v = dense::apply_pauli(x, &v)?;
                }
            }
            Ok(v)
        })
        .collect()
}

/// Computational encoding `Σ_j a_j |j̄⟩`.
pub fn encode_computational(code: &StabilizerCode, logical_state: &DenseState) -> Result<DenseState> {
    if logical_state.len() != 1 << code.k() {
        return Err(Error::Dimension { expected: 1 << code.k(), got: logical_state.len() });
    }
    if logical_state.norm() == 0.0 {
        return Err(Error::Invalid("logical state is the zero vector".into()));
    }
    let words = codewords(code)?;
    let mut out = dense::zero_state(code.n());
    for (a, w) in logical_state.iter().zip(&words) {
        out += w * *a;
    }
    Ok(out)
}

/// Logical operators chosen at construction.
pub fn logical_operators(code: &StabilizerCode) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
    (code.logical_z().to_vec(), code.logical_x().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn three() -> StabilizerCode {
        build_code(3, vec![p("ZZI"), p("IZZ")]).unwrap()
    }

    #[test]
    fn three_qubit_group() {
        let code = three();
        let names: Vec<String> = code.group_table().iter().map(|u| u.to_string()).collect();
        assert_eq!(names, ["III", "ZZI", "IZZ", "ZIZ"]);
        assert_eq!(code.k(), 1);
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let code = build_code(1, vec![]).unwrap();
        assert_eq!(code.k(), 1);
        assert_eq!(code.order(), 1);
        let pi = code_projector(&code).unwrap();
        assert!(dense::max_abs_diff(&pi, &DenseOperator::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(build_code(2, vec![p("XI"), p("ZI")]).unwrap_err(), Error::NonCommuting(1, 2));
        assert_eq!(build_code(2, vec![p("+iXI")]).unwrap_err(), Error::NonHermitian(1));
        assert!(matches!(
            build_code(2, vec![p("ZZ"), p("ZZ")]).unwrap_err(),
            Error::DependentGenerators { rank: 1, count: 2 }
        ));
        assert!(matches!(build_code(2, vec![p("ZZ"), p("-ZZ")]).unwrap_err(), Error::ScalarInGroup(_)));
        assert!(matches!(build_code(2, vec![p("ZZZ")]).unwrap_err(), Error::Dimension { .. }));
    }

    #[test]
    fn three_qubit_logicals() {
        let code = three();
        assert_eq!(code.logical_z()[0].to_string(), "ZII");
        assert_eq!(code.logical_x()[0].to_string(), "XXX");
    }

    #[test]
    fn syndrome_of_x1() {
        assert_eq!(syndrome(&three(), &p("XII"), None).unwrap(), vec![-1, 1]);
        assert_eq!(syndrome(&three(), &p("III"), None).unwrap(), vec![1, 1]);
        assert_eq!(syndrome(&three(), &p("XII"), Some(&[1])).unwrap(), vec![1]);
    }

    #[test]
    fn three_qubit_codewords() {
        let w = codewords(&three()).unwrap();
        assert_eq!(w[0], dense::ket("000"));
        assert_eq!(w[1], dense::ket("111"));
    }

    #[test]
    fn element_of_reports_phase() {
        let code = three();
        assert_eq!(code.element_of(&p("-ZIZ")), Some((3, 2)));
        assert_eq!(code.element_of(&p("XII")), None);
        assert!(code.contains(&p("IZZ")));
    }

    #[test]
    fn symplectic_fallback_gives_valid_pairs() {
        let gens = vec![p("ZZI"), p("IZZ")];
        let (zs, xs) = symplectic_logicals(3, &gens);
        assert!(validate_logicals(3, &gens, &zs, &xs).is_ok());
    }
}
