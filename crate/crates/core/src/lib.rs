//! Decide reachability of a software error condition by reducing its CNF-SAT
//! encoding to a gap-guaranteed QUBO / Ising problem and solving that with
//! simulated quantum algorithms.
//!
//! The pipeline is:
//!
//! 1. [`frontend`] produces a [`CnfFormula`] from DIMACS text, an external
//!    bounded model checker, or a synthetic generator.
//! 2. [`reduction`] turns the formula into a [`Qubo`] whose minimum is `0`
//!    exactly when the formula is satisfiable and at least `1` otherwise, and
//!    into the equivalent [`IsingModel`].
//! 3. [`solvers`] search for a zero-energy state with QAOA / VQE, Grover
//!    amplification, or a Chebyshev eigenvalue filter applied through a block
//!    encoding, all running on the dense [`simulator`].
//! 4. [`oracle`] enumerates everything exhaustively and serves as ground truth.
//!
//! Hot loops are data-parallel through rayon when the `parallel` feature is
//! enabled (the default); see [`par`].

pub mod frontend;
pub mod oracle;
pub mod par;
pub mod reduction;
pub mod rng;
pub mod simulator;
pub mod solvers;

pub use frontend::{Clause, CnfFormula, Literal, Provenance};
pub use oracle::SpectrumSummary;
pub use reduction::{GapInfo, IsingModel, Qubo, VarOrigin};
pub use rng::RunSeed;
pub use simulator::{DiagonalHamiltonian, Statevector};
pub use solvers::{SolverConfig, SolverReport, Verdict};

/// Binary assignment stored as a bit mask: bit `i` holds variable `i + 1`
/// (CNF) or QUBO index `i`, which is also qubit `i`.
pub type Assignment = u64;

/// Render an assignment MSB-first over `width` variables, i.e. variable
/// `width` is the leftmost character.
pub fn format_assignment(bits: Assignment, width: usize) -> String {
    (0..width)
        .rev()
        .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`format_assignment`].
pub fn parse_assignment(text: &str) -> Option<Assignment> {
    if text.len() > 64 {
        return None;
    }
    text.chars().try_fold(0u64, |acc, c| match c {
        '0' => Some(acc << 1),
        '1' => Some(acc << 1 | 1),
        _ => None,
    })
}
