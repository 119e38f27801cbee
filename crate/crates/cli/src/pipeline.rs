use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use qverify_core::oracle::{self, SpectrumSummary};
use qverify_core::solvers::{solve, Problem};
use qverify_core::{SolverConfig, SolverReport};

use crate::instance::Instance;

/// Exhaustive cross-check of the solver's verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleCheck {
    /// The oracle agrees with the verdict.
    Agrees { satisfiable: bool },
    /// The solver found nothing, but a solution exists.
    SolverMissed,
}

#[derive(Debug)]
pub struct PipelineRun {
    pub instance: String,
    pub problem: Problem,
    pub config: SolverConfig,
    pub report: SolverReport,
    /// `None` when the formula exceeds the oracle budget.
    pub oracle: Option<OracleCheck>,
    /// QUBO spectrum, when within the oracle budget.
    pub spectrum: Option<SpectrumSummary>,
    pub duration: Duration,
}

impl PipelineRun {
    /// Lowest objective value, if the spectrum was computed.
    pub fn optimum(&self) -> Option<f64> {
        self.spectrum.as_ref().map(|s| s.min_value as f64)
    }
}

/// Reduce `instance` and compute its gap, exactly when the QUBO fits in
/// `oracle_budget`.
pub fn prepare(instance: &Instance, oracle_budget: usize) -> anyhow::Result<Problem> {
    Problem::new(instance.formula.clone(), oracle_budget).with_context(|| format!("reducing {}", instance.name))
}

/// Solve and cross-check with the oracle. A witness for a formula the oracle
/// finds unsatisfiable is an internal error.
pub fn run_problem(name: &str, problem: &Problem, config: &SolverConfig, oracle_budget: usize) -> anyhow::Result<PipelineRun> {
    let start = Instant::now();
    let report = solve(problem, config).with_context(|| format!("{} on {name}", config.name()))?;
    let spectrum = (problem.qubo.n() <= oracle_budget).then(|| oracle::qubo_spectrum_with_budget(&problem.qubo, oracle_budget)).transpose()?;
    let oracle = match &spectrum {
        Some(s) => {
            let satisfiable = s.min_value == 0;
            match (report.verdict.is_sat(), satisfiable) {
                (true, false) => bail!("internal error: {} reported a witness for an unsatisfiable formula", config.name()),
                (false, true) => Some(OracleCheck::SolverMissed),
                _ => Some(OracleCheck::Agrees { satisfiable }),
            }
        }
        None => None,
    };
    if let (Some(w), Some(s)) = (report.verdict.witness(), &spectrum) {
        if !s.satisfying_set.contains(&w) {
            bail!("internal error: witness {w:#b} is not in the oracle's satisfying set");
        }
    }
    Ok(PipelineRun {
        instance: name.to_string(),
        problem: problem.clone(),
        config: config.clone(),
        report,
        oracle,
        spectrum,
        duration: start.elapsed(),
    })
}

pub fn run_pipeline(instance: &Instance, config: &SolverConfig, oracle_budget: usize) -> anyhow::Result<PipelineRun> {
    let problem = prepare(instance, oracle_budget)?;
    run_problem(&instance.name, &problem, config, oracle_budget)
}
