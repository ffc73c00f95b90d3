//! The shell recursion: sparse assembly, closing guesses, the backward
//! transfer-matrix chain and the resulting table of Green's function values.

mod assembly;
mod chain;
mod guess;
mod symmetry;
mod table;
mod table_io;

use thiserror::Error;

use crate::lattice::{LatticeError, LatticeIndex};
use crate::linalg::LinalgError;

pub use assembly::{assemble, assemble_even, assemble_odd, ShellSystem, SparseTriplets};
pub use chain::backward_chain;
pub use guess::{make_guess, GuessKind, GuessSpec, InitialGuess};
pub use symmetry::{canonicalize, orbit};
pub use table::{build_table, wedge_len, GreenTable};
pub use table_io::{read_table, write_table};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("invalid assembly parameter: {0}")]
    Assembly(String),
    #[error("truncation N = {0} must be odd so that N + 1 = 2p")]
    EvenTruncation(usize),
    #[error("served radius M = {m} must satisfy 1 <= M <= N = {n}")]
    InvalidRadius { m: usize, n: usize },
    #[error("inadmissible initial guess: {0}")]
    GuessInadmissible(String),
    #[error("shell {n}: singular system with {guess} guess ({source}); k may be degenerate for this guess")]
    Singular {
        n: usize,
        guess: String,
        #[source]
        source: LinalgError,
    },
    #[error("normalization 6·A1 − 6 + k² = {0:e} is too small")]
    Normalization(f64),
    #[error("{x} needs radius {required}, table serves {available}")]
    RadiusExceeded {
        x: LatticeIndex,
        required: u64,
        available: usize,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("table format, line {line}: {message}")]
    Format { line: usize, message: String },
}
