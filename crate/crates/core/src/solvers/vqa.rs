use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use super::optimize::OptimizerSpec;
use super::{trivial_report, Problem, SolverConfig, SolverError, SolverReport, Verdict, MAX_VQA_QUBITS};
use crate::rng::{stream, RunSeed};
use crate::simulator::{ansatz_param_count, DiagonalHamiltonian, SimulatorError, Statevector};
use crate::Assignment;

/// Parameters are interleaved `[γ_1, β_1, γ_2, β_2, …]`.
fn qaoa_state(h: &DiagonalHamiltonian, params: &[f64]) -> Result<Statevector, SimulatorError> {
    if !params.len().is_multiple_of(2) {
        return Err(SimulatorError::ParamCount { expected: params.len() + 1, got: params.len() });
    }
    let mut psi = Statevector::uniform_superposition(h.n_qubits())?;
    for layer in params.chunks(2) {
        psi.apply_diagonal_phase(h, layer[0])?;
        psi.apply_rx_all(layer[1]);
    }
    Ok(psi)
}

fn vqe_state(h: &DiagonalHamiltonian, layers: usize, params: &[f64]) -> Result<Statevector, SimulatorError> {
    let mut psi = Statevector::basis(h.n_qubits(), 0)?;
    psi.apply_ansatz(layers, params)?;
    Ok(psi)
}

/// Exact `⟨H⟩` after `p = params.len() / 2` QAOA layers on the uniform state.
pub fn qaoa_energy(h: &DiagonalHamiltonian, params: &[f64]) -> Result<f64, SimulatorError> {
    qaoa_state(h, params)?.expectation(h)
}

/// Exact `⟨H⟩` of the layered ansatz applied to `|0…0⟩`.
pub fn vqe_energy(h: &DiagonalHamiltonian, layers: usize, params: &[f64]) -> Result<f64, SimulatorError> {
    vqe_state(h, layers, params)?.expectation(h)
}

fn times_diagonal(psi: &Statevector, h: &DiagonalHamiltonian) -> Statevector {
    let mut out = psi.clone();
    for (a, v) in out.amplitudes_mut().iter_mut().zip(h.values()) {
        *a *= v;
    }
    out
}

fn add_into(acc: &mut Statevector, other: &Statevector) {
    for (a, b) in acc.amplitudes_mut().iter_mut().zip(other.amplitudes()) {
        *a += b;
    }
}

fn times_sum_x(psi: &Statevector) -> Statevector {
    let mut acc = psi.clone();
    acc.amplitudes_mut().fill(Complex64::new(0.0, 0.0));
    for q in 0..psi.n_qubits() {
        let mut term = psi.clone();
        term.apply_x(q).expect("qubit in range");
        add_into(&mut acc, &term);
    }
    acc
}

fn times_half_y(psi: &Statevector, qubit: usize) -> Statevector {
    let z = Complex64::new(0.0, 0.0);
    let mut out = psi.clone();
    out.apply_single(qubit, [[z, Complex64::new(0.0, -0.5)], [Complex64::new(0.0, 0.5), z]])
        .expect("qubit in range");
    out
}

/// `dE/dθ = 2·Im⟨λ|G|ψ⟩` for a gate `exp(-iθG)`, with `ψ` and `λ` taken just
/// after the gate.
fn slope(lambda: &Statevector, g_psi: &Statevector) -> f64 {
    2.0 * lambda.inner(g_psi).im
}

/// Gradient of [`qaoa_energy`] by reverse-mode propagation through the
/// circuit.
pub fn qaoa_gradient(h: &DiagonalHamiltonian, params: &[f64]) -> Result<Vec<f64>, SimulatorError> {
    let mut psi = qaoa_state(h, params)?;
    let mut lambda = times_diagonal(&psi, h);
    let mut grad = vec![0.0; params.len()];
    for k in (0..params.len() / 2).rev() {
        let (gamma, beta) = (params[2 * k], params[2 * k + 1]);
        grad[2 * k + 1] = slope(&lambda, &times_sum_x(&psi));
        psi.apply_rx_all(-beta);
        lambda.apply_rx_all(-beta);
        grad[2 * k] = slope(&lambda, &times_diagonal(&psi, h));
        psi.apply_diagonal_phase(h, -gamma)?;
        lambda.apply_diagonal_phase(h, -gamma)?;
    }
    Ok(grad)
}

/// Gradient of [`vqe_energy`]; the `RY(θ)` generator is `Y/2`.
pub fn vqe_gradient(h: &DiagonalHamiltonian, layers: usize, params: &[f64]) -> Result<Vec<f64>, SimulatorError> {
    let n = h.n_qubits();
    let mut psi = vqe_state(h, layers, params)?;
    let mut lambda = times_diagonal(&psi, h);
    let mut grad = vec![0.0; params.len()];
    for layer in (0..=layers).rev() {
        if layer < layers {
            for (c, t) in crate::simulator::ring(n).into_iter().rev() {
                psi.apply_cnot(c, t)?;
                lambda.apply_cnot(c, t)?;
            }
        }
        for q in (0..n).rev() {
            let i = layer * n + q;
            grad[i] = slope(&lambda, &times_half_y(&psi, q));
            psi.apply_ry(q, -params[i])?;
            lambda.apply_ry(q, -params[i])?;
        }
    }
    Ok(grad)
}

/// Map raw values to `(v - optimum) / (start - optimum)` clamped to `[0, 1]`,
/// where `start` is the first entry. A flat trace maps to all zeros.
pub fn normalize_trace(trace: &[(usize, f64)], optimum: f64) -> Vec<(usize, f64)> {
    let Some(&(_, start)) = trace.first() else { return vec![] };
    let span = start - optimum;
    trace
        .iter()
        .map(|&(k, v)| {
            let x = if span.abs() < 1e-12 { 0.0 } else { (v - optimum) / span };
            (k, x.clamp(0.0, 1.0))
        })
        .collect()
}

struct Variational<'a> {
    problem: &'a Problem,
    optimizer: &'a OptimizerSpec,
    shots: usize,
    seed: RunSeed,
    config: SolverConfig,
}

impl Variational<'_> {
    fn run<E>(&self, x0: Vec<f64>, energy: E, state: impl Fn(&[f64]) -> Result<Statevector, SimulatorError>) -> Result<SolverReport, SolverError>
    where
        E: Fn(&[f64]) -> f64,
    {
        let start = Instant::now();
        let mut rng = self.seed.rng(stream::OPTIMIZER);
        let minimum = self.optimizer.minimize(&energy, x0, &mut rng);
        let mut report = SolverReport {
            verdict: Verdict::no_solution("optimizer diverged"),
            best_value: minimum.value,
            convergence_trace: minimum.trace,
            shots_used: 0,
            wall_time: start.elapsed(),
            config: self.config.clone(),
            seed: Some(self.seed),
            qsvt: None,
        };
        if minimum.diverged {
            return Ok(report);
        }

        let counts = state(&minimum.x)?.sample(self.shots, self.seed);
        let mut outcomes: Vec<(Assignment, usize)> = counts.into_iter().collect();
        outcomes.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let qubo = &self.problem.qubo;
        if let Some(lowest) = outcomes.iter().map(|&(x, _)| qubo.objective(x)).min() {
            report.best_value = report.best_value.min(lowest as f64);
        }
        let witness = outcomes
            .iter()
            .filter(|&&(x, _)| qubo.objective(x) == 0)
            .find_map(|&(x, _)| self.problem.verified_witness(x));
        report.verdict = match witness.and_then(|w| Verdict::sat(&self.problem.formula, w)) {
            Some(v) => v,
            None => Verdict::no_solution(format!(
                "{} with {} optimizer iterations and {} shots",
                self.config.name(),
                self.optimizer.max_iterations,
                self.shots
            )),
        };
        report.shots_used = self.shots;
        report.wall_time = start.elapsed();
        Ok(report)
    }
}

fn check_size(problem: &Problem, solver: &'static str) -> Result<usize, SolverError> {
    let n = problem.qubo.n();
    if n > MAX_VQA_QUBITS {
        return Err(SolverError::TooLarge { solver, n, max: MAX_VQA_QUBITS });
    }
    Ok(n)
}

pub fn solve_qaoa(
    problem: &Problem,
    layers: usize,
    optimizer: &OptimizerSpec,
    shots: usize,
    seed: RunSeed,
) -> Result<SolverReport, SolverError> {
    let config = SolverConfig::Qaoa { layers, optimizer: *optimizer, shots, seed };
    if check_size(problem, "qaoa")? == 0 {
        return Ok(trivial_report(&problem.formula, config));
    }
    if layers == 0 {
        return Err(SolverError::InvalidConfig("qaoa needs at least one layer".into()));
    }
    let h = DiagonalHamiltonian::from_ising(&problem.ising);
    let mut rng = seed.rng(stream::INIT_PARAMS);
    let x0: Vec<f64> = (0..2 * layers).map(|_| rng.random_range(0.0..FRAC_PI_4)).collect();
    let run = Variational { problem, optimizer, shots, seed, config };
    run.run(x0, |p| qaoa_energy(&h, p).unwrap_or(f64::NAN), |p| qaoa_state(&h, p))
}

pub fn solve_vqe(
    problem: &Problem,
    layers: usize,
    optimizer: &OptimizerSpec,
    shots: usize,
    seed: RunSeed,
) -> Result<SolverReport, SolverError> {
    let config = SolverConfig::Vqe { layers, optimizer: *optimizer, shots, seed };
    let n = check_size(problem, "vqe")?;
    if n == 0 {
        return Ok(trivial_report(&problem.formula, config));
    }
    let h = DiagonalHamiltonian::from_ising(&problem.ising);
    let mut rng = seed.rng(stream::INIT_PARAMS);
    let x0: Vec<f64> = (0..ansatz_param_count(n, layers)).map(|_| rng.random_range(-PI..PI)).collect();
    let run = Variational { problem, optimizer, shots, seed, config };
    run.run(x0, |p| vqe_energy(&h, layers, p).unwrap_or(f64::NAN), |p| vqe_state(&h, layers, p))
}
