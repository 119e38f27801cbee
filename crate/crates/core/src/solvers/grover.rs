use std::f64::consts::FRAC_PI_4;
use std::time::Instant;

use super::{trivial_report, SolverConfig, SolverError, SolverReport, Verdict, MAX_VQA_QUBITS};
use crate::frontend::CnfFormula;
use crate::rng::RunSeed;
use crate::simulator::Statevector;
use crate::Assignment;

/// `floor(π/4 · √(2^n / s))`
pub fn grover_iterations(n_qubits: usize, solutions: u64) -> u64 {
    (FRAC_PI_4 * ((1u64 << n_qubits) as f64 / solutions as f64).sqrt()).floor() as u64
}

struct Pass<'a> {
    formula: &'a CnfFormula,
    shots: usize,
    seed: RunSeed,
    shots_used: usize,
    trace: Vec<(usize, f64)>,
}

impl Pass<'_> {
    /// One sweep over assumed solution counts `s = 2^k`, `k = 0..width`.
    fn sweep(&mut self, extra_control: bool) -> Result<Option<Assignment>, SolverError> {
        let vars = self.formula.num_variables() as usize;
        let width = vars + usize::from(extra_control);
        for k in 0..width {
            let s = 1u64 << k;
            let mut psi = Statevector::uniform_superposition(width)?;
            for _ in 0..grover_iterations(width, s) {
                psi.phase_oracle(self.formula, extra_control)?;
                psi.grover_diffusion();
            }
            let point = self.trace.len() as u64;
            let counts = psi.sample(self.shots, self.seed.derive(point));
            self.shots_used += self.shots;

            let threshold = (2.0 / 3.0) / s as f64;
            let mut candidates: Vec<(Assignment, usize)> = counts
                .into_iter()
                .filter(|&(_, c)| c as f64 / self.shots as f64 >= threshold)
                .collect();
            candidates.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            let top = candidates.first().map_or(0.0, |&(_, c)| c as f64 / self.shots as f64);
            self.trace.push((self.trace.len(), top));

            let low = (1u64 << vars) - 1;
            if let Some(w) = candidates
                .iter()
                .filter(|&&(x, _)| x >> vars == 0)
                .map(|&(x, _)| x & low)
                .find(|&w| self.formula.satisfies(w))
            {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }
}

/// Grover search over the CNF variables with an unknown solution count:
/// ascending powers of two, then one pass over a doubled space.
pub fn solve_grover(formula: &CnfFormula, shots: usize, seed: RunSeed) -> Result<SolverReport, SolverError> {
    let config = SolverConfig::Grover { shots, seed };
    let n = formula.num_variables() as usize;
    if n > MAX_VQA_QUBITS {
        return Err(SolverError::TooLarge { solver: "grover", n, max: MAX_VQA_QUBITS });
    }
    if n == 0 {
        return Ok(trivial_report(formula, config));
    }
    if shots == 0 {
        return Err(SolverError::InvalidConfig("grover needs at least one shot".into()));
    }
    let start = Instant::now();
    let mut pass = Pass { formula, shots, seed, shots_used: 0, trace: vec![] };
    let witness = match pass.sweep(false)? {
        Some(w) => Some(w),
        None => pass.sweep(true)?,
    };
    let verdict = witness
        .and_then(|w| Verdict::sat(formula, w))
        .unwrap_or_else(|| Verdict::no_solution(format!("grover schedule over {n} and {} qubits, {shots} shots per point", n + 1)));
    Ok(SolverReport {
        best_value: if verdict.is_sat() { 0.0 } else { 1.0 },
        verdict,
        convergence_trace: pass.trace,
        shots_used: pass.shots_used,
        wall_time: start.elapsed(),
        config,
        seed: Some(seed),
        qsvt: None,
    })
}
