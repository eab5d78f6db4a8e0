//! The `verify-all` check suite and its JSON report.
//!
//! Every record carries a verdict. Checks whose dense oracle would exceed a
//! cap are reported as `skipped(cap)` rather than failed. Random inputs come
//! from a fixed-seed generator so repeated runs produce identical reports.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dense::{self, c, DenseOperator, DenseState, MATRIX_CAP, STATE_CAP};
use crate::duality::{self, check_duality, dual_rep_from_basis, fidelity, gauge_fix_errors, DualRep};
use crate::error::{Error, Result};
use crate::error_frames::{
    build_factorization, build_maximal_error_set, factorized_action_is_gauge_only, frame_algebra_dim, kl_check,
    kl_check_dense, FACTORIZATION_CAP,
};
use crate::group::Character;
use crate::pauli::PauliOperator;
use crate::qrf_local::{frame_local_restricted_paulis, LocalFrame, SeedBasis};
use crate::stabilizer::{self, StabilizerCode};

/// Version tag of the report layout.
pub const REPORT_SCHEMA: &str = "qrfcode-report/1";
/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Largest `n` for the exhaustive frame-local Pauli scan.
pub const NO_GO_SCAN_CAP: usize = 4;
/// Largest `m` for the exhaustive group-closure and cocycle checks.
pub const EXHAUSTIVE_M_CAP: usize = 8;
const RNG_SEED: u64 = 0x005e_ed0f_c0de;
const RANDOM_SAMPLES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped(cap)")]
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub verdict: Verdict,
    pub max_deviation: Option<f64>,
    /// Only filled when timings are requested, keeping default reports reproducible.
    pub elapsed_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub tol: f64,
    pub max_dense_n: usize,
    pub passed: bool,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.verdict == Verdict::Fail)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub tol: f64,
    pub max_dense_n: usize,
    pub timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { tol: DEFAULT_TOL, max_dense_n: STATE_CAP, timings: false }
    }
}

impl SuiteOptions {
    /// Clamps `max_dense_n` to the state-vector cap.
    pub fn new(tol: f64, max_dense_n: usize, timings: bool) -> Self {
        SuiteOptions { tol, max_dense_n: max_dense_n.min(STATE_CAP), timings }
    }
}

/// What a single check produced.
enum Outcome {
    Deviation(f64),
    Exact(bool, Option<String>),
    Skipped(String),
}

struct Runner<'a> {
    opts: SuiteOptions,
    n: usize,
    records: &'a mut Vec<CheckRecord>,
}

impl Runner<'_> {
    /// Runs `f` unless `n` exceeds `cap` or `max_dense_n`.
    fn run(&mut self, name: &str, anchor: &str, cap: Option<usize>, f: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let outcome = match cap {
            Some(cap) if self.n > cap.min(self.opts.max_dense_n) => {
                Ok(Outcome::Skipped(format!("n = {} exceeds cap {}", self.n, cap.min(self.opts.max_dense_n))))
            }
            _ => f(),
        };
        let (verdict, max_deviation, detail) = match outcome {
            Ok(Outcome::Deviation(d)) => {
                let ok = d <= self.opts.tol;
                (if ok { Verdict::Pass } else { Verdict::Fail }, Some(d), None)
            }
            Ok(Outcome::Exact(ok, detail)) => {
                (if ok { Verdict::Pass } else { Verdict::Fail }, Some(if ok { 0.0 } else { 1.0 }), detail)
            }
            Ok(Outcome::Skipped(why)) => (Verdict::Skipped, None, Some(why)),
            Err(Error::CapExceeded { n, cap }) => (Verdict::Skipped, None, Some(format!("size {n} exceeds cap {cap}"))),
            Err(e) => (Verdict::Fail, None, Some(e.to_string())),
        };
        let elapsed_ms = self.opts.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        self.records.push(CheckRecord {
            name: name.to_string(),
            anchor: anchor.to_string(),
            verdict,
            max_deviation,
            elapsed_ms,
            detail,
        });
    }
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> DenseState {
    let v = DenseState::from_fn(dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let norm = v.norm();
    v / c(norm, 0.0)
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DenseOperator {
    let mut rho = DenseOperator::zeros(dim, dim);
    let weights: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let psi = random_state(rng, dim);
        rho += dense::outer(&psi, &psi) * c(w / total, 0.0);
    }
    rho
}

fn random_code_state(rng: &mut ChaCha8Rng, code: &StabilizerCode) -> Result<DenseState> {
    let logical = random_state(rng, 1 << code.k());
    stabilizer::encode_computational(code, &logical)
}

/// Runs every check on `code`.
pub fn verify_all(code: &StabilizerCode, opts: SuiteOptions) -> Report {
    let opts = SuiteOptions::new(opts.tol, opts.max_dense_n, opts.timings);
    let mut records = Vec::new();
    let mut r = Runner { opts, n: code.n(), records: &mut records };
    let tol = opts.tol;
    let m = code.m();
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);

    r.run("group-closure", "stabilizer group multiplication with exact phases", None, || {
        if m > EXHAUSTIVE_M_CAP {
            return Err(Error::CapExceeded { n: m, cap: EXHAUSTIVE_M_CAP });
        }
        let table = code.group_table();
        for g in 0..table.len() {
            for h in 0..table.len() {
                if table[g].multiply(&table[h])? != table[g ^ h] {
                    return Ok(Outcome::Exact(false, Some(format!("U^{g} U^{h} != U^{}", g ^ h))));
                }
            }
        }
        Ok(Outcome::Exact(true, None))
    });

    r.run("faithfulness", "generator rank and absence of -I", None, || {
        let rank = code.generator_matrix().rank();
        if rank != m {
            return Ok(Outcome::Exact(false, Some(format!("rank {rank} != {m}"))));
        }
        let minus = PauliOperator::identity(code.n()).with_phase(2);
        Ok(Outcome::Exact(!code.contains(&minus), None))
    });

    r.run("logical-operators", "logical Pauli commutation relations", None, || {
        let (zs, xs) = (code.logical_z(), code.logical_x());
        let mut ok = zs.len() == code.k() && xs.len() == code.k();
        for p in zs.iter().chain(xs) {
            ok &= code.generators().iter().all(|g| g.commutes(p).unwrap_or(false));
            ok &= !code.contains(p);
        }
        for (i, z) in zs.iter().enumerate() {
            for (j, x) in xs.iter().enumerate() {
                ok &= z.commutes(x)? == (i != j);
            }
            for z2 in zs {
                ok &= z.commutes(z2)?;
            }
        }
        for x in xs {
            for x2 in xs {
                ok &= x.commutes(x2)?;
            }
        }
        Ok(Outcome::Exact(ok, None))
    });

    r.run("code-projector", "code projector as the group average of stabilizers", Some(MATRIX_CAP), || {
        let pi = stabilizer::code_projector(code)?;
        let coeffs = dense::pauli_coefficients(&pi, tol)?;
        let expected = 1.0 / code.order() as f64;
        let mut dev = 0.0f64;
        if coeffs.len() != code.order() {
            return Ok(Outcome::Exact(false, Some(format!("{} Pauli terms, expected {}", coeffs.len(), code.order()))));
        }
        for (coef, p) in &coeffs {
            let Some((_, phase)) = code.element_of(p) else {
                return Ok(Outcome::Exact(false, Some(format!("term {p} is not a stabilizer"))));
            };
            let sign = if phase == 0 { 1.0 } else { -1.0 };
            dev = dev.max((coef - c(sign * expected, 0.0)).norm());
        }
        if dense::projector_rank(&pi) != 1 << code.k() {
            return Ok(Outcome::Exact(false, Some("rank differs from 2^k".into())));
        }
        Ok(Outcome::Deviation(dev))
    });

    r.run("codewords", "generators stabilize the orthonormal codewords", Some(STATE_CAP), || {
        let words = stabilizer::codewords(code)?;
        let mut dev = 0.0f64;
        for (i, w) in words.iter().enumerate() {
            for g in code.generators() {
                dev = dev.max(dense::max_abs_diff_state(&dense::apply_pauli(g, w)?, w));
            }
            for (j, v) in words.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((dense::inner_product(w, v) - c(target, 0.0)).norm());
            }
        }
        Ok(Outcome::Deviation(dev))
    });

    let maximal = build_maximal_error_set(code, &[]);

    r.run("knill-laflamme", "KL matrix of a maximal error set is the identity", None, || {
        let errors = maximal.clone()?;
        let report = kl_check(code, &errors)?;
        let id = DenseOperator::identity(errors.len(), errors.len());
        let mut dev = dense::max_abs_diff(&report.c, &id);
        if !report.correctable {
            return Ok(Outcome::Exact(false, Some("maximal set reported uncorrectable".into())));
        }
        if code.n() <= MATRIX_CAP && code.n() <= opts.max_dense_n {
            let mats = errors.iter().map(dense::pauli_matrix).collect::<Result<Vec<_>>>()?;
            let dense_report = kl_check_dense(code, &mats, tol)?;
            dev = dev.max(dense::max_abs_diff(&dense_report.c, &id)).max(dense_report.max_residual);
        }
        Ok(Outcome::Deviation(dev))
    });

    r.run("error-space-isometry", "errors map the code space onto their isotype", Some(MATRIX_CAP), || {
        let errors = maximal.clone()?;
        let pi = stabilizer::code_projector(code)?;
        let mut dev = 0.0f64;
        for (chi, e) in errors.iter().enumerate() {
            let p = stabilizer::isotype_projector(code, &Character::from_index(m, chi))?;
            let em = dense::pauli_matrix(e)?;
            let img = &p * &em * &pi * em.adjoint() * &p;
            dev = dev.max((dense::trace(&img) - c((1u64 << code.k()) as f64, 0.0)).norm());
            dev = dev.max(dense::max_abs_diff(&(&em * &pi * em.adjoint()), &p));
        }
        Ok(Outcome::Deviation(dev))
    });

    let rhos: Vec<DenseOperator> = if code.n() <= MATRIX_CAP {
        (0..RANDOM_SAMPLES).map(|_| random_density(&mut rng, 1 << code.n())).collect()
    } else {
        Vec::new()
    };

    r.run("twirl-identity", "charge measurement equals the stabilizer twirl", Some(MATRIX_CAP), || {
        let mut dev = 0.0f64;
        for rho in &rhos {
            let a = duality::charge_measurement(code, rho)?;
            let b = duality::stabilizer_twirl(code, rho)?;
            dev = dev.max(dense::max_abs_diff(&a, &b));
        }
        Ok(Outcome::Deviation(dev))
    });

    r.run("frame-algebra-dimension", "frame algebra spanned by E_i Pi E_j^dagger", Some(MATRIX_CAP), || {
        let dim = frame_algebra_dim(code, &maximal.clone()?)?;
        let expected = 1usize << (2 * m);
        Ok(Outcome::Exact(dim == expected, Some(format!("dimension {dim}, expected {expected}"))))
    });

    let frame = LocalFrame::new(code, None, &SeedBasis::X);

    r.run("local-frame", "seed, orientation basis and covariance of the local frame", Some(STATE_CAP), || {
        let frame = frame.clone()?;
        let mut dev = frame.orthonormality_deviation();
        if code.n() <= MATRIX_CAP {
            dev = dev.max(frame.covariance_deviation()?);
        }
        if !frame.reconstructs_group() {
            return Ok(Outcome::Exact(false, Some("fragments do not reconstruct the group".into())));
        }
        Ok(Outcome::Deviation(dev))
    });

    r.run("cocycle-condition", "2-cocycle condition on all triples", None, || {
        let frame = frame.clone()?;
        if m > EXHAUSTIVE_M_CAP {
            return Err(Error::CapExceeded { n: m, cap: EXHAUSTIVE_M_CAP });
        }
        let size = frame.order();
        for g in 0..size {
            for h in 0..size {
                for k in 0..size {
                    let lhs = (frame.cocycle(g, h ^ k) + frame.cocycle(h, k)) % 4;
                    let rhs = (frame.cocycle(g, h) + frame.cocycle(g ^ h, k)) % 4;
                    if lhs != rhs {
                        return Ok(Outcome::Exact(false, Some(format!("fails at ({g}, {h}, {k})"))));
                    }
                }
            }
        }
        Ok(Outcome::Exact(true, None))
    });

    r.run(
        "disentangler-recovery",
        "pointer states and logical unitaries after the disentangler",
        Some(MATRIX_CAP),
        || {
            let rec = frame.clone()?.recover_via_disentangler(&maximal.clone()?)?;
            Ok(Outcome::Deviation(rec.gram_deviation.max(rec.max_residual())))
        },
    );

    r.run("trivialized-errors", "orientation-basis dual errors after the disentangler", Some(MATRIX_CAP), || {
        Ok(Outcome::Deviation(frame.clone()?.trivialized_error_deviation()?))
    });

    r.run("no-go-frame-local", "no Pauli acts frame-locally on the code space", Some(NO_GO_SCAN_CAP), || {
        let frame = frame.clone()?;
        let trivial_s = frame.fragments_s().iter().all(|p| p.is_identity_string());
        let found = frame_local_restricted_paulis(&frame, tol)?;
        if trivial_s {
            return Ok(Outcome::Exact(
                true,
                Some(format!("system fragments trivial; {} frame-local Paulis", found.len())),
            ));
        }
        let detail = found.first().map(|p| format!("found {p}"));
        Ok(Outcome::Exact(found.is_empty(), detail))
    });

    let factorization = maximal.clone().and_then(|errs| build_factorization(code, &errs));

    r.run("factorization", "unitary, covariant factorization from an error set", Some(FACTORIZATION_CAP), || {
        let fact = factorization.clone()?;
        let mut dev = fact.unitarity_deviation();
        dev = dev.max(fact.covariance_deviation()?);
        Ok(Outcome::Deviation(dev))
    });

    r.run("kl-factorization", "correctable errors act on the gauge factor only", Some(FACTORIZATION_CAP), || {
        let ok = factorized_action_is_gauge_only(code, &maximal.clone()?, tol)?;
        Ok(Outcome::Exact(ok, None))
    });

    r.run("fourier-relation", "mutually unbiased group and character bases", Some(FACTORIZATION_CAP), || {
        Ok(Outcome::Deviation(duality::fourier_basis_relation(code, &factorization.clone()?)?.max()))
    });

    let rep: Result<DualRep> = frame.clone().and_then(|f| dual_rep_from_basis(&f));

    r.run("duality-weyl", "Weyl relation between U^g and the dual representation", Some(STATE_CAP), || {
        let verdict = check_duality(code, &rep.clone()?, tol)?;
        let detail = verdict
            .weyl_violation
            .map(|(g, chi)| format!("Weyl relation fails at g={g}, chi={chi}"))
            .or(verdict.representation_violation.map(|(a, b)| format!("not a representation at ({a}, {b})")));
        Ok(Outcome::Exact(verdict.passed, detail))
    });

    let gauge = rep.clone().and_then(|rep| gauge_fix_errors(&rep, &maximal.clone()?, None));

    r.run("gauge-fixing", "unitary gauge-fixing errors and their KL conditions", Some(MATRIX_CAP), || {
        Ok(Outcome::Deviation(gauge.clone()?.verify()?.max()))
    });

    r.run(
        "dual-recovery",
        "dual recovery restores code states after each gauge-fixing error",
        Some(MATRIX_CAP),
        || {
            let gauge = gauge.clone()?;
            let mut dev = 0.0f64;
            for _ in 0..RANDOM_SAMPLES {
                let psi = random_code_state(&mut rng, code)?;
                let rho = dense::outer(&psi, &psi);
                for g in 0..gauge.order() {
                    let u = gauge.unitary(g);
                    let out = gauge.dual_recovery(&(u * &rho * u.adjoint()));
                    dev = dev.max(1.0 - fidelity(&psi, &out));
                }
            }
            Ok(Outcome::Deviation(dev))
        },
    );

    r.run("electric-recovery", "electric recovery restores code states after each error", Some(MATRIX_CAP), || {
        let errors = maximal.clone()?;
        let mut dev = 0.0f64;
        for _ in 0..RANDOM_SAMPLES {
            let psi = random_code_state(&mut rng, code)?;
            let rho = dense::outer(&psi, &psi);
            for e in &errors {
                let em = dense::pauli_matrix(e)?;
                let out = duality::electric_recovery(code, &errors, &(&em * &rho * em.adjoint()))?;
                dev = dev.max(dense::max_abs_diff(&out, &rho));
            }
        }
        Ok(Outcome::Deviation(dev))
    });

    r.run("dual-twirl", "dual twirl equals the dual charge measurement", Some(MATRIX_CAP), || {
        let (rep, gauge) = (rep.clone()?, gauge.clone()?);
        let mut dev = 0.0f64;
        for rho in &rhos {
            let a = duality::dual_twirl(&rep, rho)?;
            let b = gauge.dual_charge_measurement(rho);
            dev = dev.max(dense::max_abs_diff(&a, &b));
        }
        Ok(Outcome::Deviation(dev))
    });

    r.run("complementarity", "charges and dual charges are complementary", Some(MATRIX_CAP), || {
        Ok(Outcome::Deviation(duality::complementarity_deviation(&rep.clone()?)?))
    });

    r.run("blanket-recovery", "minimum eigenvalue of I - 2^(n-k) Pi", Some(MATRIX_CAP), || {
        let min = duality::blanket_recovery_min_eigenvalue(code)?;
        let expected = 1.0 - (1u64 << m) as f64;
        Ok(Outcome::Deviation((min - expected).abs()))
    });

    let passed = records.iter().all(|r| r.verdict != Verdict::Fail);
    Report {
        schema: REPORT_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        code: code.name().to_string(),
        n: code.n(),
        k: code.k(),
        tol,
        max_dense_n: opts.max_dense_n,
        passed,
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_code;

    #[test]
    fn three_qubit_suite_passes() {
        let report = verify_all(&load_code("3qubit").unwrap(), SuiteOptions::default());
        for rec in &report.records {
            assert_eq!(rec.verdict, Verdict::Pass, "{} {:?}", rec.name, rec.detail);
        }
        assert!(report.records.iter().all(|r| r.elapsed_ms.is_none()));
    }

    #[test]
    fn reports_are_reproducible() {
        let code = load_code("3qubit").unwrap();
        let a = serde_json::to_string(&verify_all(&code, SuiteOptions::default())).unwrap();
        let b = serde_json::to_string(&verify_all(&code, SuiteOptions::default())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dense_cap_skips() {
        let code = load_code("5qubit").unwrap();
        let report = verify_all(&code, SuiteOptions::new(1e-10, 4, false));
        let skipped = report.records.iter().find(|r| r.name == "code-projector").unwrap();
        assert_eq!(skipped.verdict, Verdict::Skipped);
        assert!(report.passed);
    }
}
