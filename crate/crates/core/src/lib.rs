//! Pauli stabilizer codes, quantum reference frames and error duality.
//!
//! The crate builds stabilizer codes from Pauli generators, extracts local
//! and error-generated reference frames, constructs dual gauge-fixing error
//! sets and surface codes, and checks every identity against a dense
//! state-vector oracle at small qubit counts.

pub mod catalog;
pub mod dense;
pub mod duality;
pub mod error;
pub mod error_frames;
pub mod gf2;
pub mod group;
pub mod pauli;
pub mod qrf_local;
pub mod stabilizer;
pub mod suite;
pub mod surface;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVec};
pub use group::{Character, GroupElement, GroupFunction};
pub use pauli::{Letter, PauliOperator};
pub use stabilizer::{build_code, StabilizerCode};
