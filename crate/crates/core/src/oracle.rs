//! Exhaustive ground truth: satisfying sets, full QUBO spectra and closed-form
//! success probabilities. Plain enumeration over bit masks, no search.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::frontend::{masks_satisfied, CnfFormula};
use crate::par;
use crate::reduction::Qubo;
use crate::Assignment;

pub const DEFAULT_BUDGET: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive enumeration over {n} variables exceeds the budget of {budget}")]
    BudgetExceeded { n: usize, budget: usize },
}

fn check_budget(n: usize, budget: usize) -> Result<(), OracleError> {
    if n > budget.min(40) {
        Err(OracleError::BudgetExceeded { n, budget })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumSummary {
    pub min_value: i64,
    pub min_count: u64,
    /// Zero-level minimizers projected onto the original variables,
    /// ascending and deduplicated. Empty when the minimum is positive.
    pub satisfying_set: Vec<Assignment>,
    pub value_histogram: BTreeMap<i64, u64>,
    pub max_value: i64,
}

pub fn enumerate_sat(formula: &CnfFormula) -> Result<Vec<Assignment>, OracleError> {
    enumerate_sat_with_budget(formula, DEFAULT_BUDGET)
}

/// All satisfying assignments in ascending order.
pub fn enumerate_sat_with_budget(formula: &CnfFormula, budget: usize) -> Result<Vec<Assignment>, OracleError> {
    let n = formula.num_variables() as usize;
    check_budget(n, budget)?;
    let masks = formula.clause_masks();
    Ok(par::fold_chunks(
        1usize << n,
        Vec::new(),
        |mut acc, x| {
            if masks_satisfied(&masks, x as u64) {
                acc.push(x as u64);
            }
            acc
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    ))
}

pub fn is_satisfiable(formula: &CnfFormula) -> Result<bool, OracleError> {
    let n = formula.num_variables() as usize;
    check_budget(n, DEFAULT_BUDGET)?;
    let masks = formula.clause_masks();
    Ok(par::fold_chunks(1usize << n, false, |acc, x| acc || masks_satisfied(&masks, x as u64), |a, b| a || b))
}

pub fn qubo_spectrum(q: &Qubo) -> Result<SpectrumSummary, OracleError> {
    qubo_spectrum_with_budget(q, DEFAULT_BUDGET)
}

#[derive(Clone)]
struct Partial {
    histogram: BTreeMap<i64, u64>,
    zeros: Vec<Assignment>,
}

pub fn qubo_spectrum_with_budget(q: &Qubo, budget: usize) -> Result<SpectrumSummary, OracleError> {
    let n = q.n();
    check_budget(n, budget)?;
    let project = q.original_mask();
    let partial = par::fold_chunks(
        1usize << n,
        Partial { histogram: BTreeMap::new(), zeros: Vec::new() },
        |mut acc, x| {
            let v = q.objective(x as u64);
            *acc.histogram.entry(v).or_insert(0) += 1;
            if v == 0 {
                acc.zeros.push(x as u64 & project);
            }
            acc
        },
        |mut a, b| {
            for (v, c) in b.histogram {
                *a.histogram.entry(v).or_insert(0) += c;
            }
            a.zeros.extend(b.zeros);
            a
        },
    );
    let (&min_value, &min_count) = partial.histogram.first_key_value().expect("2^n ≥ 1 points");
    let max_value = *partial.histogram.last_key_value().unwrap().0;
    let mut satisfying_set = partial.zeros;
    satisfying_set.sort_unstable();
    satisfying_set.dedup();
    Ok(SpectrumSummary { min_value, min_count, satisfying_set, value_histogram: partial.histogram, max_value })
}

/// Probability of measuring any of `solutions` marked states out of
/// `states` after `iterations` Grover iterations from the uniform state:
/// `sin²((2r + 1)·θ)` with `θ = arcsin(√(M/N))`.
pub fn grover_success_probability(states: u64, solutions: u64, iterations: u64) -> f64 {
    let theta = (solutions as f64 / states as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Exact post-selection rate of a diagonal filter applied to the uniform
/// superposition, straight from the spectrum: `Σ_v count(v)·f(v/scale)² / 2^n`.
/// Also returns the part contributed by non-solutions.
pub fn filter_rate(spectrum: &SpectrumSummary, scale: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let total: u64 = spectrum.value_histogram.values().sum();
    let mut rate = 0.0;
    let mut leakage = 0.0;
    for (&v, &count) in &spectrum.value_histogram {
        let p = count as f64 * f(v as f64 / scale).powi(2) / total as f64;
        rate += p;
        if v != 0 {
            leakage += p;
        }
    }
    (rate, leakage)
}
