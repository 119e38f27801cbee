//! Dense statevector engine.
//!
//! Little-endian: qubit `q` is bit `q` of the basis index, so basis index `x`
//! is also the QUBO assignment mask `x`.

mod hamiltonian;
mod state;

use thiserror::Error;

pub use hamiltonian::DiagonalHamiltonian;
pub(crate) use state::ring;
pub use state::{ansatz_param_count, unitarity_deviation, Matrix, PostSelection, Statevector};

pub const MAX_QUBITS: usize = 24;

/// Tolerance for unitarity checks of user-supplied matrices.
pub const UNITARY_TOL: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum SimulatorError {
    #[error("{0} qubits is outside the supported range 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitIndex { qubit: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expected {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("qubit subset contains duplicates")]
    DuplicateQubits,
    #[error("amplitudes are not normalized (norm² = {0})")]
    NotNormalized(f64),
}
