//! `qrfcode`: build stabilizer codes, extract reference frames, certify
//! dualities and run the verification suite from the command line.
//!
//! Exit status is 0 when every verdict passes, 1 when a verification fails
//! and 2 for usage errors or unreadable input.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrfcode_core::suite::DEFAULT_TOL;

#[derive(Parser, Debug)]
#[command(name = "qrfcode", version, about = "Stabilizer codes as quantum reference frames")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Absolute tolerance for floating-point comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Largest qubit count for dense state-vector checks (at most 13).
    #[arg(long, global = true, default_value_t = 13)]
    pub max_dense_n: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record wall-clock times (reports are then no longer reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a code and print its group table and logical operators.
    Build {
        #[arg(long)]
        code: String,
    },
    /// Knill–Laflamme check of an error set.
    KlCheck {
        #[arg(long)]
        code: String,
        #[arg(long)]
        errors: PathBuf,
    },
    /// Local or error-generated reference frames.
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Dual representation, gauge-fixing errors and dual recovery for a frame.
    Duality {
        #[arg(long)]
        code: String,
        /// Frame-spec JSON file; the default local frame when omitted.
        #[arg(long)]
        frame: Option<PathBuf>,
    },
    /// Surface code on a rectangular lattice or closed map.
    Surface {
        /// Lattice JSON file, inline JSON, `rect:LxH` or `torus:AxB`.
        #[arg(long)]
        lattice: String,
        /// Spanning forest pair and its dual representation.
        #[arg(long)]
        forests: bool,
        /// Create, dress and correct a single vertex defect on a rectangle.
        #[arg(long)]
        defect_demo: bool,
    },
    /// Run every check on a code.
    VerifyAll {
        #[arg(long)]
        code: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum FrameCommand {
    /// Frame on a subset of physical qubits.
    Local {
        #[arg(long)]
        code: String,
        /// 1-based frame qubits, comma separated.
        #[arg(long, value_delimiter = ',')]
        frame_qubits: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = BasisArg::X)]
        basis: BasisArg,
    },
    /// Frame fields and factorization generated by an error set.
    FromErrors {
        #[arg(long)]
        code: String,
        #[arg(long)]
        errors: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisArg {
    X,
    Y,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
