//! Code-spec JSON and the bundled code catalog.
//!
//! Catalog names resolve against `$QRFCODE_CATALOG/<name>.json` when the
//! variable is set, then against the entries compiled into the crate.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::stabilizer::{build_code, build_code_with_logicals, StabilizerCode};

/// Environment variable naming a directory of catalog JSON files.
pub const CATALOG_ENV: &str = "QRFCODE_CATALOG";

const BUNDLED: &[(&str, &str)] =
    &[("3qubit", include_str!("../catalog/3qubit.json")), ("5qubit", include_str!("../catalog/5qubit.json"))];

/// `{ "name", "n", "generators", "logical_z"?, "logical_x"? }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub name: String,
    pub n: usize,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logical_z: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logical_x: Option<Vec<String>>,
}

fn parse_all(texts: &[String], n: usize) -> Result<Vec<PauliOperator>> {
    texts.iter().map(|t| PauliOperator::parse_n(t, n)).collect()
}

impl CodeSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<StabilizerCode> {
        let generators = parse_all(&self.generators, self.n)?;
        let code = match (&self.logical_z, &self.logical_x) {
            (Some(z), Some(x)) => {
                build_code_with_logicals(self.n, generators, parse_all(z, self.n)?, parse_all(x, self.n)?)?
            }
            (None, None) => build_code(self.n, generators)?,
            _ => return Err(Error::InvalidLogicals("logical_z and logical_x must be given together".into())),
        };
        Ok(code.with_name(self.name.clone()))
    }

    /// Spec of an existing code, with its logical operators.
    pub fn of(code: &StabilizerCode) -> Self {
        let text = |ps: &[PauliOperator]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        CodeSpec {
            name: code.name().to_string(),
            n: code.n(),
            generators: text(code.generators()),
            logical_z: Some(text(code.logical_z())),
            logical_x: Some(text(code.logical_x())),
        }
    }
}

/// Names of the bundled catalog entries.
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

/// JSON text of catalog entry `name`.
pub fn catalog_text(name: &str) -> Result<String> {
    if let Ok(dir) = std::env::var(CATALOG_ENV) {
        let path = Path::new(&dir).join(format!("{name}.json"));
        if path.is_file() {
            return std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())));
        }
    }
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| Error::UnknownCode(name.to_string()))
}

/// Resolves a file path to a code-spec JSON, or else a catalog name.
pub fn load_spec(name_or_path: &str) -> Result<CodeSpec> {
    let path = Path::new(name_or_path);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
    } else {
        catalog_text(name_or_path)?
    };
    CodeSpec::from_json(&text)
}

pub fn load_code(name_or_path: &str) -> Result<StabilizerCode> {
    load_spec(name_or_path)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_entries_build() {
        let three = load_code("3qubit").unwrap();
        assert_eq!((three.n(), three.k()), (3, 1));
        let five = load_code("5qubit").unwrap();
        assert_eq!((five.n(), five.k(), five.name()), (5, 1, "5qubit"));
        assert!(matches!(load_code("7qubit"), Err(Error::UnknownCode(_))));
    }

    #[test]
    fn spec_round_trip() {
        let code = load_code("5qubit").unwrap();
        let again = CodeSpec::of(&code).build().unwrap();
        assert_eq!(again.generators(), code.generators());
        assert_eq!(again.logical_x(), code.logical_x());
    }
}
