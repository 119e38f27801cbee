//! Solution strategies for the reduced problem. Every solver returns a
//! [`SolverReport`]; a `Sat` verdict can only be built from a witness that
//! satisfies the CNF formula.

mod grover;
pub mod optimize;
pub mod qsvt;
mod vqa;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::CnfFormula;
use crate::oracle::{self, OracleError};
use crate::reduction::{
    compute_gap_with_budget, cnf_to_qubo, qubo_to_ising, GapInfo, IsingModel, Qubo, ReductionError,
};
use crate::rng::RunSeed;
use crate::simulator::SimulatorError;
use crate::{format_assignment, Assignment};

pub use grover::{grover_iterations, solve_grover};
pub use optimize::{OptimizerKind, OptimizerSpec};
pub use qsvt::{
    build_block_encoding, choose_degree, filter_quality_mu, solve_qsvt, BlockEncoding, FilterPolynomial, QsvtStats,
};
pub use vqa::{normalize_trace, qaoa_energy, qaoa_gradient, solve_qaoa, solve_vqe, vqe_energy, vqe_gradient};

/// Largest register the variational and Grover solvers accept.
pub const MAX_VQA_QUBITS: usize = 20;
/// Largest system register for the filter solver (one ancilla on top).
pub const MAX_QSVT_QUBITS: usize = 16;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("{solver} supports at most {max} qubits, instance needs {n}")]
    TooLarge { solver: &'static str, n: usize, max: usize },
    #[error("filter degree cap of {cap} cannot reach quality 2^{n_qubits} at gap {gap}")]
    DegreeCapExceeded { gap: f64, n_qubits: usize, cap: u32 },
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("block encoding entry {value} at index {index} lies outside [0, 1]")]
    BoundViolated { index: usize, value: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A reduced instance: formula, QUBO, Ising form and gap data.
#[derive(Clone, Debug)]
pub struct Problem {
    pub formula: CnfFormula,
    pub qubo: Qubo,
    pub ising: IsingModel,
    pub gap: GapInfo,
}

impl Problem {
    /// Reduce `formula`; the exact gap is computed when the QUBO fits within
    /// `exact_budget` variables.
    pub fn new(formula: CnfFormula, exact_budget: usize) -> Result<Self, SolverError> {
        let qubo = cnf_to_qubo(&formula)?;
        let ising = qubo_to_ising(&qubo);
        let gap = compute_gap_with_budget(&qubo, qubo.n() <= exact_budget, exact_budget)?;
        Ok(Problem { formula, qubo, ising, gap })
    }

    /// Project a QUBO assignment onto the CNF variables and keep it only if
    /// it satisfies the formula.
    pub fn verified_witness(&self, qubo_bits: Assignment) -> Option<Assignment> {
        let w = qubo_bits & self.qubo.original_mask();
        self.formula.satisfies(w).then_some(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat { witness: Assignment },
    NoSolutionFound { budget: String },
}

impl Verdict {
    /// `Sat` only if `witness` satisfies `formula`.
    pub fn sat(formula: &CnfFormula, witness: Assignment) -> Option<Verdict> {
        formula.satisfies(witness).then_some(Verdict::Sat { witness })
    }

    pub fn no_solution(budget: impl Into<String>) -> Verdict {
        Verdict::NoSolutionFound { budget: budget.into() }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat { .. })
    }

    pub fn witness(&self) -> Option<Assignment> {
        match self {
            Verdict::Sat { witness } => Some(*witness),
            Verdict::NoSolutionFound { .. } => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Sat { .. } => "sat",
            Verdict::NoSolutionFound { .. } => "no-solution-found",
        }
    }
}

/// Solver configuration, also the JSON block echoed into reports:
/// `{solver, layers|d, optimizer{kind, max_iterations, tolerance}, shots, seed}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "lowercase")]
pub enum SolverConfig {
    Brute {
        #[serde(default = "default_budget")]
        budget: usize,
    },
    Qaoa {
        layers: usize,
        optimizer: OptimizerSpec,
        shots: usize,
        seed: RunSeed,
    },
    Vqe {
        layers: usize,
        optimizer: OptimizerSpec,
        shots: usize,
        seed: RunSeed,
    },
    Grover {
        shots: usize,
        seed: RunSeed,
    },
    Qsvt {
        /// Half degree; chosen automatically when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<u32>,
        shots: usize,
        seed: RunSeed,
    },
}

fn default_budget() -> usize {
    oracle::DEFAULT_BUDGET
}

impl SolverConfig {
    pub fn name(&self) -> &'static str {
        match self {
            SolverConfig::Brute { .. } => "brute",
            SolverConfig::Qaoa { .. } => "qaoa",
            SolverConfig::Vqe { .. } => "vqe",
            SolverConfig::Grover { .. } => "grover",
            SolverConfig::Qsvt { .. } => "qsvt",
        }
    }

    pub fn seed(&self) -> Option<RunSeed> {
        match *self {
            SolverConfig::Brute { .. } => None,
            SolverConfig::Qaoa { seed, .. }
            | SolverConfig::Vqe { seed, .. }
            | SolverConfig::Grover { seed, .. }
            | SolverConfig::Qsvt { seed, .. } => Some(seed),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverReport {
    pub verdict: Verdict,
    pub best_value: f64,
    /// `(iteration, objective)`; raw expectation values for the variational
    /// solvers, top candidate frequency per schedule point for Grover.
    pub convergence_trace: Vec<(usize, f64)>,
    pub shots_used: usize,
    pub wall_time: Duration,
    pub config: SolverConfig,
    pub seed: Option<RunSeed>,
    pub qsvt: Option<QsvtStats>,
}

impl SolverReport {
    pub fn witness_text(&self, width: usize) -> Option<String> {
        self.verdict.witness().map(|w| format_assignment(w, width))
    }
}

/// Exhaustive search through the oracle.
pub fn solve_brute(problem: &Problem, budget: usize) -> Result<SolverReport, SolverError> {
    let start = std::time::Instant::now();
    let sat = oracle::enumerate_sat_with_budget(&problem.formula, budget)?;
    let verdict = sat
        .first()
        .and_then(|&w| Verdict::sat(&problem.formula, w))
        .unwrap_or_else(|| Verdict::no_solution(format!("exhaustive over {} variables", problem.formula.num_variables())));
    let best_value = if verdict.is_sat() { 0.0 } else { 1.0 };
    Ok(SolverReport {
        verdict,
        best_value,
        convergence_trace: vec![],
        shots_used: 0,
        wall_time: start.elapsed(),
        config: SolverConfig::Brute { budget },
        seed: None,
        qsvt: None,
    })
}

pub fn solve(problem: &Problem, config: &SolverConfig) -> Result<SolverReport, SolverError> {
    match config {
        SolverConfig::Brute { budget } => solve_brute(problem, *budget),
        SolverConfig::Qaoa { layers, optimizer, shots, seed } => solve_qaoa(problem, *layers, optimizer, *shots, *seed),
        SolverConfig::Vqe { layers, optimizer, shots, seed } => solve_vqe(problem, *layers, optimizer, *shots, *seed),
        SolverConfig::Grover { shots, seed } => solve_grover(&problem.formula, *shots, *seed),
        SolverConfig::Qsvt { d, shots, seed } => solve_qsvt(problem, *d, *shots, *seed),
    }
}

/// Report for an instance without variables: the empty assignment decides it.
pub(crate) fn trivial_report(formula: &CnfFormula, config: SolverConfig) -> SolverReport {
    let verdict = Verdict::sat(formula, 0).unwrap_or_else(|| Verdict::no_solution("no variables"));
    SolverReport {
        best_value: if verdict.is_sat() { 0.0 } else { 1.0 },
        verdict,
        convergence_trace: vec![],
        shots_used: 0,
        wall_time: Duration::ZERO,
        seed: config.seed(),
        config,
        qsvt: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::Provenance;

    #[test]
    fn sat_verdict_requires_valid_witness() {
        let f = CnfFormula::from_signed(2, &[&[1, 2]], Provenance::DimacsFile).unwrap();
        assert!(Verdict::sat(&f, 0b00).is_none());
        assert_eq!(Verdict::sat(&f, 0b10), Some(Verdict::Sat { witness: 0b10 }));
    }

    #[test]
    fn config_json_shape() {
        let cfg = SolverConfig::Qaoa {
            layers: 3,
            optimizer: OptimizerSpec::new(OptimizerKind::TrustRegion, 200),
            shots: 1024,
            seed: RunSeed(42),
        };
        let v = serde_json::to_value(&cfg).unwrap();
        assert_eq!(v["solver"], "qaoa");
        assert_eq!(v["layers"], 3);
        assert_eq!(v["optimizer"]["kind"], "trust-region");
        assert_eq!(v["seed"], 42);
        let back: SolverConfig = serde_json::from_value(v).unwrap();
        assert_eq!(back, cfg);
        let q: SolverConfig = serde_json::from_str(r#"{"solver":"qsvt","d":8,"shots":10,"seed":1}"#).unwrap();
        assert_eq!(q, SolverConfig::Qsvt { d: Some(8), shots: 10, seed: RunSeed(1) });
    }

    #[test]
    fn brute_force() {
        let f = crate::frontend::generate_synthetic("unique").unwrap();
        let p = Problem::new(f, 24).unwrap();
        let r = solve_brute(&p, 24).unwrap();
        assert_eq!(r.verdict, Verdict::Sat { witness: 42 });
        assert_eq!(r.witness_text(6).as_deref(), Some("101010"));
    }
}
