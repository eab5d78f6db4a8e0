//! Error-set and frame-spec JSON files.

use std::path::Path;

use qrfcode_core::dense::{c, DenseState};
use qrfcode_core::qrf_local::{product_state, LocalFrame, SeedBasis};
use qrfcode_core::{Error, PauliOperator, Result, StabilizerCode};
use serde::Deserialize;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn check_code(named: Option<&str>, code: &StabilizerCode) -> Result<()> {
    match named {
        Some(name) if name != code.name() => {
            Err(Error::CodeMismatch(format!("file is for '{name}', but the code is '{}'", code.name())))
        }
        _ => Ok(()),
    }
}

/// `{ "code": name, "errors": [pauli-text] }`.
#[derive(Deserialize)]
struct ErrorSetFile {
    code: Option<String>,
    errors: Vec<String>,
}

pub fn load_errors(path: &Path, code: &StabilizerCode) -> Result<Vec<PauliOperator>> {
    let file: ErrorSetFile = serde_json::from_str(&read(path)?)?;
    check_code(file.code.as_deref(), code)?;
    file.errors.iter().map(|t| PauliOperator::parse_n(t, code.n())).collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SeedField {
    Descriptor(String),
    Amplitudes(Vec<[f64; 2]>),
}

/// `{ "code": name, "frame_qubits": [int], "seed": descriptor | [[re, im]], "basis": "X" | "Y" | "custom" }`.
#[derive(Deserialize)]
struct FrameSpecFile {
    code: Option<String>,
    frame_qubits: Option<Vec<usize>>,
    seed: Option<SeedField>,
    basis: Option<String>,
}

pub fn load_frame(path: &Path, code: &StabilizerCode) -> Result<LocalFrame> {
    let spec: FrameSpecFile = serde_json::from_str(&read(path)?)?;
    check_code(spec.code.as_deref(), code)?;
    let seed = match spec.seed {
        None => None,
        Some(SeedField::Descriptor(d)) => Some(product_state(&d)?),
        Some(SeedField::Amplitudes(a)) => {
            Some(DenseState::from_iterator(a.len(), a.iter().map(|[re, im]| c(*re, *im))))
        }
    };
    let basis = match (spec.basis.as_deref().unwrap_or(if seed.is_some() { "custom" } else { "X" }), seed) {
        ("X" | "x", None) => SeedBasis::X,
        ("Y" | "y", None) => SeedBasis::Y,
        ("custom", Some(s)) => SeedBasis::Custom(s),
        (b, _) => return Err(Error::Invalid(format!("basis '{b}' needs a seed exactly when it is 'custom'"))),
    };
    match spec.frame_qubits {
        Some(q) => LocalFrame::on_qubits(code, &q, &basis),
        None => LocalFrame::new(code, None, &basis),
    }
}
