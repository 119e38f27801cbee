//! Eigenvalue filtering: apply a Chebyshev filter `F(A)` of the scaled
//! Hamiltonian through a block encoding and post-select the ancilla, which
//! keeps (mostly) the zero-energy states.

mod block;
mod filter;

use std::time::Instant;

use serde::Serialize;

use super::{trivial_report, Problem, SolverConfig, SolverError, SolverReport, Verdict, MAX_QSVT_QUBITS};
use crate::rng::RunSeed;
use crate::simulator::Statevector;
use crate::Assignment;

pub use block::{build_block_encoding, BlockEncoding};
pub use filter::{choose_degree, filter_quality_mu, FilterPolynomial, DEGREE_CAP};

/// Post-selection probabilities below this count as zero.
pub const RATE_FLOOR: f64 = 1e-12;
/// Largest gap handed to the filter; a gap of 1 leaves no room for `1 - δ²`.
pub const MAX_FILTER_GAP: f64 = 0.9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QsvtStats {
    pub half_degree: u32,
    pub degree: u32,
    /// Gap the filter was built for.
    pub gap: f64,
    /// Divisor turning the objective into `A`.
    pub scale: u64,
    /// Exact post-selection probability.
    pub rate: f64,
    /// Fraction of shots with the ancilla in `|0⟩`.
    pub sampled_rate: f64,
    /// Part of `rate` carried by non-solutions.
    pub leakage: f64,
    pub leakage_bound: f64,
    /// Alternating layers of the equivalent signal-processing circuit.
    pub layers: u32,
}

/// Filter gap derived from the instance gap.
pub fn filter_gap(problem: &Problem) -> f64 {
    let (_, gap) = problem.gap.filter_scale();
    (*gap.numer() as f64 / *gap.denom() as f64).min(MAX_FILTER_GAP)
}

pub fn solve_qsvt(problem: &Problem, d: Option<u32>, shots: usize, seed: RunSeed) -> Result<SolverReport, SolverError> {
    let config = SolverConfig::Qsvt { d, shots, seed };
    let n = problem.qubo.n();
    if n > MAX_QSVT_QUBITS {
        return Err(SolverError::TooLarge { solver: "qsvt", n, max: MAX_QSVT_QUBITS });
    }
    if n == 0 {
        return Ok(trivial_report(&problem.formula, config));
    }
    let start = Instant::now();
    let gap = filter_gap(problem);
    let half_degree = match d {
        Some(d) => d,
        None => choose_degree(gap, n)?,
    };
    let filter = FilterPolynomial::new(half_degree, gap)?;
    let encoding = build_block_encoding(&problem.ising, &problem.gap)?;

    let mut psi = Statevector::uniform_superposition(n)?;
    let mut amplitudes = psi.amplitudes().to_vec();
    amplitudes.resize(2 << n, Default::default());
    psi = Statevector::from_amplitudes(amplitudes)?;
    encoding.apply_with(&mut psi, |a| filter.eval(a))?;

    let selected = psi.post_select(&[n], &[false])?;
    let rate = selected.probability;
    let weights = encoding.diagonal();
    let leakage: f64 = weights
        .iter()
        .filter(|&&a| a > 0.0)
        .map(|&a| filter.eval(a).powi(2))
        .sum::<f64>()
        / weights.len() as f64;

    let counts = psi.sample(shots, seed);
    let mut kept: Vec<(Assignment, usize)> = counts.into_iter().filter(|&(x, _)| x >> n == 0).collect();
    let sampled_rate = if shots == 0 { 0.0 } else { kept.iter().map(|&(_, c)| c).sum::<usize>() as f64 / shots as f64 };
    kept.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let witness = if rate < RATE_FLOOR {
        None
    } else {
        kept.iter()
            .filter(|&&(x, _)| problem.qubo.objective(x) == 0)
            .find_map(|&(x, _)| problem.verified_witness(x))
    };
    let verdict = witness
        .and_then(|w| Verdict::sat(&problem.formula, w))
        .unwrap_or_else(|| Verdict::no_solution(format!("filter degree {} with {shots} shots", filter.degree())));
    let best_value = kept
        .iter()
        .map(|&(x, _)| problem.qubo.objective(x) as f64)
        .fold(f64::INFINITY, f64::min);

    Ok(SolverReport {
        verdict,
        best_value,
        convergence_trace: vec![],
        shots_used: shots,
        wall_time: start.elapsed(),
        config,
        seed: Some(seed),
        qsvt: Some(QsvtStats {
            half_degree,
            degree: filter.degree(),
            gap,
            scale: problem.gap.filter_scale().0,
            rate,
            sampled_rate,
            leakage,
            leakage_bound: filter.leakage_bound(),
            layers: filter.degree() + 1,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{CnfFormula, Provenance};
    use crate::oracle::{filter_rate, qubo_spectrum};

    fn problem(n: u32, clauses: &[&[i64]]) -> Problem {
        Problem::new(CnfFormula::from_signed(n, clauses, Provenance::DimacsFile).unwrap(), 24).unwrap()
    }

    #[test]
    fn rate_matches_spectrum() {
        let p = problem(3, &[&[1, 2, 3]]);
        let r = solve_qsvt(&p, None, 500, RunSeed(42)).unwrap();
        assert!(r.verdict.is_sat());
        let stats = r.qsvt.unwrap();
        let f = FilterPolynomial::new(stats.half_degree, stats.gap).unwrap();
        let (rate, leakage) = filter_rate(&qubo_spectrum(&p.qubo).unwrap(), stats.scale as f64, |x| f.eval(x));
        assert!((stats.rate - rate).abs() < 1e-9);
        assert!((stats.leakage - leakage).abs() < 1e-9);
        assert!(stats.leakage <= stats.leakage_bound + 1e-12);
        assert_eq!(stats.layers, stats.degree + 1);
    }

    #[test]
    fn contradiction_is_pure_leakage() {
        let p = problem(2, &[&[1], &[-1], &[2]]);
        let r = solve_qsvt(&p, Some(4), 200, RunSeed(42)).unwrap();
        let stats = r.qsvt.unwrap();
        assert!(!r.verdict.is_sat());
        assert!(stats.rate <= stats.leakage_bound + 1e-12);
        assert!((stats.rate - stats.leakage).abs() < 1e-12);
    }

    #[test]
    fn block_encoding_scale_bounds_entries() {
        let p = problem(4, &[&[1, 2, 3, 4], &[-1, -2]]);
        let be = build_block_encoding(&p.ising, &p.gap).unwrap();
        assert!(be.diagonal().iter().all(|a| (0.0..=1.0).contains(a)));
    }
}
