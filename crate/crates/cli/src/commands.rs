//! Subcommand implementations. Each returns whether all verdicts passed and
//! writes its JSON document to `--out` or stdout.

use qrfcode_core::catalog::{load_code, CodeSpec};
use qrfcode_core::dense::{self, DenseOperator, DenseState, MATRIX_CAP};
use qrfcode_core::duality::{
    check_duality, dual_rep_from_basis, dual_rep_from_frame_fields, fidelity, gauge_fix_errors, DualRep, DualityVerdict,
};
use qrfcode_core::error_frames::{
    build_maximal_error_set, factorization_from_list, frame_algebra_dim, frame_fields_from_errors, kl_check,
    kl_check_dense, FACTORIZATION_CAP,
};
use qrfcode_core::qrf_local::{LocalFrame, SeedBasis};
use qrfcode_core::stabilizer::{self, StabilizerCode};
use qrfcode_core::suite::{verify_all, SuiteOptions, REPORT_SCHEMA};
use qrfcode_core::surface::{
    boundary_composition, coboundary_composition, correct_single_defect, dress_single_defect, forest_dual_rep,
    homology_rank, rect_path_down, rect_path_up, rect_vertex, spanning_forests, string_operator, vertex_plaquette_code,
    LatticeSpec, MapShape, StringKind, SurfaceCode, FOREST_REP_MAX_M,
};
use qrfcode_core::{Character, Error, PauliOperator, Result};
use serde_json::{json, Value};

use crate::{input, BasisArg, Cli, Command, Common, FrameCommand};

pub fn run(cli: &Cli) -> Result<bool> {
    let common = &cli.common;
    let (doc, passed) = match &cli.command {
        Command::Build { code } => build(&load_code(code)?),
        Command::KlCheck { code, errors } => {
            let code = load_code(code)?;
            let errors = input::load_errors(errors, &code)?;
            kl(common, &code, &errors)?
        }
        Command::Frame(FrameCommand::Local { code, frame_qubits, basis }) => {
            let code = load_code(code)?;
            let basis = match basis {
                BasisArg::X => SeedBasis::X,
                BasisArg::Y => SeedBasis::Y,
            };
            let frame = match frame_qubits {
                Some(q) => LocalFrame::on_qubits(&code, q, &basis)?,
                None => LocalFrame::new(&code, None, &basis)?,
            };
            frame_local(common, &frame)?
        }
        Command::Frame(FrameCommand::FromErrors { code, errors }) => {
            let code = load_code(code)?;
            let errors = input::load_errors(errors, &code)?;
            from_errors(common, &code, &errors)?
        }
        Command::Duality { code, frame } => {
            let code = load_code(code)?;
            let frame = match frame {
                Some(path) => input::load_frame(path, &code)?,
                None => LocalFrame::new(&code, None, &SeedBasis::X)?,
            };
            duality(common, &frame)?
        }
        Command::Surface { lattice, forests, defect_demo } => {
            let text = match std::path::Path::new(lattice).is_file() {
                true => std::fs::read_to_string(lattice).map_err(|e| Error::Io(format!("{lattice}: {e}")))?,
                false => lattice.clone(),
            };
            surface(common, &LatticeSpec::parse(&text)?, *forests, *defect_demo)?
        }
        Command::VerifyAll { code } => {
            let report =
                verify_all(&load_code(code)?, SuiteOptions::new(common.tol, common.max_dense_n, common.timings));
            let passed = report.passed;
            (serde_json::to_value(report)?, passed)
        }
    };
    emit(common, &doc)?;
    Ok(passed)
}

fn emit(common: &Common, doc: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)? + "\n";
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dense_ok(common: &Common, n: usize, cap: usize) -> bool {
    n <= cap && n <= common.max_dense_n.min(dense::STATE_CAP)
}

fn complex_matrix(m: &DenseOperator) -> Value {
    let rows: Vec<Vec<[f64; 2]>> =
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    json!(rows)
}

fn strings(ps: &[PauliOperator]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn one_based(pairs: &[(usize, usize)]) -> Vec<[usize; 2]> {
    pairs.iter().map(|&(i, j)| [i + 1, j + 1]).collect()
}

fn header(kind: &str, code: &StabilizerCode) -> Value {
    json!({
        "schema": REPORT_SCHEMA,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "kind": kind,
        "code": code.name(),
        "n": code.n(),
        "k": code.k(),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

fn build(code: &StabilizerCode) -> (Value, bool) {
    let group: Option<Vec<Value>> = (code.m() <= 10).then(|| {
        (0..code.order())
            .map(|g| json!({ "index": g, "label": Character::from_index(code.m(), g).label(), "element": code.element(g).to_string() }))
            .collect()
    });
    let doc = json!({
        "spec": CodeSpec::of(code),
        "m": code.m(),
        "group": group,
    });
    (merge(header("build", code), doc), true)
}

fn kl(common: &Common, code: &StabilizerCode, errors: &[PauliOperator]) -> Result<(Value, bool)> {
    let report = kl_check(code, errors)?;
    let id = DenseOperator::identity(errors.len(), errors.len());
    let c_is_identity = dense::max_abs_diff(&report.c, &id) <= common.tol;
    let dense_residual = if dense_ok(common, code.n(), MATRIX_CAP) {
        let mats = errors.iter().map(dense::pauli_matrix).collect::<Result<Vec<_>>>()?;
        let d = kl_check_dense(code, &mats, common.tol)?;
        Some(json!({ "correctable": d.correctable, "max_residual": d.max_residual, "c": complex_matrix(&d.c) }))
    } else {
        None
    };
    let doc = json!({
        "errors": strings(errors),
        "sectors": report.sectors.iter().map(|s| s.label()).collect::<Vec<_>>(),
        "correctable": report.correctable,
        "c_is_identity": c_is_identity,
        "distinct_sectors": report.sectors.iter().map(|s| s.index()).collect::<std::collections::BTreeSet<_>>().len(),
        "c": complex_matrix(&report.c),
        "violations": one_based(&report.violations),
        "same_sector": one_based(&report.same_sector),
        "duplicates": one_based(&report.duplicates),
        "dense": dense_residual,
    });
    Ok((merge(header("kl-check", code), doc), report.correctable))
}

fn verdict_json(v: &Result<DualityVerdict>) -> (Value, bool) {
    match v {
        Ok(v) => (json!(v), v.passed),
        Err(Error::CapExceeded { n, cap }) => (json!({ "skipped": format!("size {n} exceeds cap {cap}") }), true),
        Err(e) => (json!({ "error": e.to_string() }), false),
    }
}

fn rep_json(rep: &DualRep) -> Vec<String> {
    rep.ops().iter().map(|op| op.describe()).collect()
}

fn state_json(s: &DenseState) -> Vec<[f64; 2]> {
    s.iter().map(|a| [a.re, a.im]).collect()
}

fn frame_local(common: &Common, frame: &LocalFrame) -> Result<(Value, bool)> {
    let code = frame.code();
    let orthonormality = frame.orthonormality_deviation();
    let reconstructs = frame.reconstructs_group();
    let rep = dual_rep_from_basis(frame)?;
    let (weyl, weyl_ok) = verdict_json(&check_duality(code, &rep, common.tol));
    let doc = json!({
        "frame_qubits": frame.frame_qubits(),
        "system_qubits": frame.system_qubits(),
        "fragments_r": strings(frame.fragments_r()),
        "fragments_s": strings(frame.fragments_s()),
        "seed": state_json(frame.seed()),
        "cocycle": frame.cocycle_table(),
        "orthonormality_deviation": orthonormality,
        "reconstructs_group": reconstructs,
        "dual_rep": rep_json(&rep),
        "duality": weyl,
    });
    let passed = orthonormality <= common.tol && reconstructs && weyl_ok;
    Ok((merge(header("frame-local", code), doc), passed))
}

fn from_errors(common: &Common, code: &StabilizerCode, errors: &[PauliOperator]) -> Result<(Value, bool)> {
    let report = kl_check(code, errors)?;
    let mut passed = report.correctable;
    let mut doc = json!({
        "errors": strings(errors),
        "correctable": report.correctable,
        "violations": one_based(&report.violations),
    });
    if !report.correctable {
        return Ok((merge(header("frame-from-errors", code), doc), false));
    }
    let kept: Vec<PauliOperator> = report.deduplicated().into_iter().map(|i| errors[i].clone()).collect();
    let fields = build_maximal_error_set(code, &kept).and_then(|max| frame_fields_from_errors(code, &max));
    match &fields {
        Ok(f) => doc["frame_fields"] = json!(strings(f.fields())),
        Err(e) => {
            doc["frame_fields"] = json!({ "error": e.to_string() });
            passed = false;
        }
    }
    if dense_ok(common, code.n(), MATRIX_CAP) {
        doc["frame_algebra_dim"] = json!(frame_algebra_dim(code, &kept)?);
        if let Ok(f) = &fields {
            let rep = dual_rep_from_frame_fields(f)?;
            let (weyl, ok) = verdict_json(&check_duality(code, &rep, common.tol));
            doc["dual_rep"] = json!(rep_json(&rep));
            doc["duality"] = weyl;
            passed &= ok;
        }
    }
    if dense_ok(common, code.n(), FACTORIZATION_CAP) {
        let fact = factorization_from_list(code, &kept)?;
        let unitarity = fact.unitarity_deviation();
        let covariance = fact.covariance_deviation()?;
        let mut gauge_only = true;
        for e in errors {
            gauge_only &= fact.acts_on_gauge_only(e, common.tol)?;
        }
        doc["factorization"] = json!({
            "representatives": strings(fact.representatives()),
            "unitarity_deviation": unitarity,
            "covariance_deviation": covariance,
            "errors_act_on_gauge_only": gauge_only,
            "table": fact.table(common.tol),
        });
        passed &= unitarity <= common.tol && covariance <= common.tol && gauge_only;
    }
    Ok((merge(header("frame-from-errors", code), doc), passed))
}

fn duality(common: &Common, frame: &LocalFrame) -> Result<(Value, bool)> {
    let code = frame.code();
    let rep = dual_rep_from_basis(frame)?;
    let (weyl, mut passed) = verdict_json(&check_duality(code, &rep, common.tol));
    let mut doc = json!({
        "frame_qubits": frame.frame_qubits(),
        "dual_rep": rep_json(&rep),
        "duality": weyl,
    });
    if dense_ok(common, code.n(), MATRIX_CAP) {
        let base = build_maximal_error_set(code, &[])?;
        let kl_report = kl_check(code, &base)?;
        doc["base_errors"] = json!(strings(&base));
        doc["kl"] = complex_matrix(&kl_report.c);
        let gauge = gauge_fix_errors(&rep, &base, None)?;
        let checks = gauge.verify()?;
        passed &= checks.max() <= common.tol;
        let words = stabilizer::codewords(code)?;
        let psi = words.iter().fold(DenseState::zeros(words[0].len()), |acc, w| acc + w);
        let psi = &psi / dense::c(psi.norm(), 0.0);
        let rho = dense::outer(&psi, &psi);
        let fidelities: Vec<f64> = (0..gauge.order())
            .map(|g| {
                let u = gauge.unitary(g);
                fidelity(&psi, &gauge.dual_recovery(&(u * &rho * u.adjoint())))
            })
            .collect();
        passed &= fidelities.iter().all(|f| 1.0 - f <= common.tol);
        doc["gauge_fixing"] = json!(checks);
        doc["dual_recovery_fidelities"] = json!(fidelities);
    } else {
        doc["gauge_fixing"] = json!({ "skipped": format!("n = {} exceeds dense cap", code.n()) });
    }
    Ok((merge(header("duality", code), doc), passed))
}

fn surface(common: &Common, spec: &LatticeSpec, forests: bool, demo: bool) -> Result<(Value, bool)> {
    let map = spec.build()?;
    let s = vertex_plaquette_code(&map)?;
    let code = s.code();
    let zero_maps = boundary_composition(&map).rows().iter().all(|r| r.is_zero())
        && coboundary_composition(&map).rows().iter().all(|r| r.is_zero());
    let hom = homology_rank(&map);
    let expected_k = map.genus().map_or(1, |g| 2 * g);
    let mut passed = zero_maps && hom == expected_k && code.k() == expected_k;
    let mut doc = json!({
        "schema": REPORT_SCHEMA,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "kind": "surface",
        "lattice": map,
        "counts": { "vertices": map.num_vertices(), "edges": map.num_edges(), "faces": map.num_faces() },
        "euler_characteristic": map.euler_characteristic(),
        "n": code.n(),
        "k": code.k(),
        "quotient_rank": s.quotient_rank(),
        "kernel": s.kernel_elements(),
        "generators": strings(code.generators()),
        "boundary_maps_compose_to_zero": zero_maps,
        "homology_rank": hom,
    });
    if forests || demo {
        let fp = spanning_forests(&map)?;
        if forests {
            let leftover_ok = fp.leftover().len() == expected_k;
            passed &= leftover_ok;
            let (weyl, ok) = if code.m() <= FOREST_REP_MAX_M {
                verdict_json(&forest_dual_rep(&s, &fp).and_then(|rep| check_duality(code, &rep, common.tol)))
            } else {
                (json!({ "skipped": format!("m = {} exceeds {FOREST_REP_MAX_M}", code.m()) }), true)
            };
            passed &= ok;
            doc["forests"] = json!({
                "tree": fp.tree(),
                "dual_tree": fp.dual_tree(),
                "leftover": fp.leftover(),
                "leftover_count": fp.leftover().len(),
                "duality": weyl,
            });
        }
        if demo {
            let (value, ok) = defect_demo(common, &s, &fp)?;
            passed &= ok;
            doc["defect_demo"] = value;
        }
    }
    Ok((doc, passed))
}

/// Creates a single vertex defect in the middle row by a string from the top
/// and by one from the bottom, corrects both with the tree path and reports
/// which correction completes a logical operator.
fn defect_demo(common: &Common, s: &SurfaceCode, fp: &qrfcode_core::surface::ForestPair) -> Result<(Value, bool)> {
    let MapShape::Rect { l, h } = s.map().shape() else {
        return Ok((json!({ "skipped": "defect demo runs on rectangular lattices" }), true));
    };
    let (r, col) = (h / 2, l / 2);
    let v = rect_vertex(l, r, col);
    let dense = dense_ok(common, s.code().n(), dense::STATE_CAP);
    let plus = if dense {
        let (zero, one) = s.homological_codewords()?;
        let p = &zero + &one;
        Some(&p / dense::c(p.norm(), 0.0))
    } else {
        None
    };
    let zbar = &s.code().logical_z()[0];
    let mut cases = Vec::new();
    let mut ok = true;
    let mut failures = 0;
    for (name, path) in [("from-top", rect_path_up(l, r, col)), ("from-bottom", rect_path_down(l, h, r, col))] {
        let error = string_operator(s.map(), &path, StringKind::Z)?;
        let dressing = dress_single_defect(s, fp, &error)?;
        failures += usize::from(dressing.logical_failure);
        let mut case = json!({
            "error_path": path,
            "vertex": v,
            "correction": dressing.correction.to_string(),
            "logical_failure": dressing.logical_failure,
        });
        if let Some(psi) = &plus {
            let hit = dense::apply_pauli(&error, psi)?;
            let fixed = correct_single_defect(s, fp, &hit, common.tol)?;
            let target = if dressing.logical_failure { dense::apply_pauli(zbar, psi)? } else { psi.clone() };
            let dev = dense::max_abs_diff_state(&fixed.corrected, &target);
            ok &= fixed.vertices == vec![v] && dev <= common.tol;
            case["sector"] = json!({ "vertices": fixed.vertices, "faces": fixed.faces });
            case["dense_deviation"] = json!(dev);
        }
        cases.push((name, case));
    }
    ok &= failures == 1;
    let doc = Value::Object(cases.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
    Ok((doc, ok))
}
