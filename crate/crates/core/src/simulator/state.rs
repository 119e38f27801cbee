use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::distr::{weighted::WeightedIndex, Distribution};

use super::{DiagonalHamiltonian, SimulatorError, MAX_QUBITS, UNITARY_TOL};
use crate::frontend::{masks_satisfied, CnfFormula};
use crate::par;
use crate::rng::{stream, RunSeed};
use crate::Assignment;

pub type Matrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Outcome of [`Statevector::post_select`]. `state` is `None` when the
/// condition has zero probability.
#[derive(Clone, Debug)]
pub struct PostSelection {
    pub state: Option<Statevector>,
    pub probability: f64,
}

pub fn ansatz_param_count(n_qubits: usize, layers: usize) -> usize {
    n_qubits * (layers + 1)
}

impl Statevector {
    fn check_qubits(n: usize) -> Result<(), SimulatorError> {
        if (1..=MAX_QUBITS).contains(&n) {
            Ok(())
        } else {
            Err(SimulatorError::QubitCount(n))
        }
    }

    fn check_index(&self, qubit: usize) -> Result<(), SimulatorError> {
        if qubit < self.n_qubits {
            Ok(())
        } else {
            Err(SimulatorError::QubitIndex { qubit, n: self.n_qubits })
        }
    }

    /// Equal superposition of all `2^n` basis states.
    pub fn uniform_superposition(n: usize) -> Result<Self, SimulatorError> {
        Self::check_qubits(n)?;
        let amp = Complex64::new((1usize << n) as f64, 0.0).sqrt().inv();
        Ok(Statevector { n_qubits: n, amplitudes: vec![amp; 1 << n] })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self, SimulatorError> {
        Self::check_qubits(n)?;
        if index >= 1 << n {
            return Err(SimulatorError::DimensionMismatch { expected: 1 << n, got: index });
        }
        let mut amplitudes = vec![ZERO; 1 << n];
        amplitudes[index] = ONE;
        Ok(Statevector { n_qubits: n, amplitudes })
    }

    /// Amplitudes must already be normalized within `1e-10`.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimulatorError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(SimulatorError::DimensionMismatch { expected: len.next_power_of_two(), got: len });
        }
        let state = Statevector { n_qubits: len.trailing_zeros() as usize, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimulatorError::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Raw access for non-unitary work such as gradient back-propagation.
    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        let a = &self.amplitudes;
        par::sum_indexed(a.len(), |i| a[i].norm_sqr())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let a = &self.amplitudes;
        par::map_indexed(a.len(), |i| a[i].norm_sqr())
    }

    pub fn inner(&self, other: &Statevector) -> Complex64 {
        let (a, b) = (&self.amplitudes, &other.amplitudes);
        let re = par::sum_indexed(a.len(), |i| (a[i].conj() * b[i]).re);
        let im = par::sum_indexed(a.len(), |i| (a[i].conj() * b[i]).im);
        Complex64::new(re, im)
    }

    /// `⟨ψ|H|ψ⟩`
    pub fn expectation(&self, h: &DiagonalHamiltonian) -> Result<f64, SimulatorError> {
        self.check_dim(h)?;
        let (a, v) = (&self.amplitudes, h.values());
        Ok(par::sum_indexed(a.len(), |i| a[i].norm_sqr() * v[i]))
    }

    fn check_dim(&self, h: &DiagonalHamiltonian) -> Result<(), SimulatorError> {
        if h.n_qubits() != self.n_qubits {
            return Err(SimulatorError::DimensionMismatch { expected: self.n_qubits, got: h.n_qubits() });
        }
        Ok(())
    }

    /// `amplitude[x] *= exp(-i·gamma·values[x])`
    pub fn apply_diagonal_phase(&mut self, h: &DiagonalHamiltonian, gamma: f64) -> Result<(), SimulatorError> {
        self.check_dim(h)?;
        let v = h.values();
        par::for_each_indexed(&mut self.amplitudes, |i, a| *a *= Complex64::from_polar(1.0, -gamma * v[i]));
        Ok(())
    }

    /// Apply a 2×2 matrix `[[m00, m01], [m10, m11]]` to one qubit.
    pub fn apply_single(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) -> Result<(), SimulatorError> {
        self.check_index(qubit)?;
        let half = 1usize << qubit;
        par::for_each_block(&mut self.amplitudes, 2 * half, |_, block| {
            let (lo, hi) = block.split_at_mut(half);
            par::for_each_pair(lo, hi, |_, a, b| {
                let (x, y) = (*a, *b);
                *a = m[0][0] * x + m[0][1] * y;
                *b = m[1][0] * x + m[1][1] * y;
            });
        });
        Ok(())
    }

    /// `RX(2·beta) = exp(-i·beta·X)` on every qubit.
    pub fn apply_rx_all(&mut self, beta: f64) {
        let (c, s) = (Complex64::new(beta.cos(), 0.0), Complex64::new(0.0, -beta.sin()));
        for q in 0..self.n_qubits {
            self.apply_single(q, [[c, s], [s, c]]).expect("qubit in range");
        }
    }

    /// `RY(theta) = exp(-i·theta·Y/2)`.
    pub fn apply_ry(&mut self, qubit: usize, theta: f64) -> Result<(), SimulatorError> {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
        self.apply_single(qubit, [[c, -s], [s, c]])
    }

    pub fn apply_x(&mut self, qubit: usize) -> Result<(), SimulatorError> {
        self.apply_single(qubit, [[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<(), SimulatorError> {
        self.check_index(control)?;
        self.check_index(target)?;
        if control == target {
            return Err(SimulatorError::DuplicateQubits);
        }
        let half = 1usize << target;
        let cbit = 1usize << control;
        par::for_each_block(&mut self.amplitudes, 2 * half, |b, block| {
            let base = b * 2 * half;
            let (lo, hi) = block.split_at_mut(half);
            par::for_each_pair(lo, hi, |k, a, c| {
                if (base + k) & cbit != 0 {
                    std::mem::swap(a, c);
                }
            });
        });
        Ok(())
    }

    /// Layered real-amplitude ansatz: per layer, `RY` on every qubit followed
    /// by a ring of CNOTs `q → q+1 (mod n)`; then a final `RY` layer.
    /// Parameter `layer·n + q` drives qubit `q` in rotation layer `layer`.
    pub fn apply_ansatz(&mut self, layers: usize, params: &[f64]) -> Result<(), SimulatorError> {
        let n = self.n_qubits;
        let expected = ansatz_param_count(n, layers);
        if params.len() != expected {
            return Err(SimulatorError::ParamCount { expected, got: params.len() });
        }
        for layer in 0..=layers {
            for q in 0..n {
                self.apply_ry(q, params[layer * n + q])?;
            }
            if layer < layers {
                for (c, t) in ring(n) {
                    self.apply_cnot(c, t)?;
                }
            }
        }
        Ok(())
    }

    /// Negate the amplitude of every basis state whose low bits satisfy
    /// `formula`. With `extra_control`, the register carries one more qubit
    /// (the highest) and only states with that qubit at `0` are marked, which
    /// doubles the search space without adding solutions.
    pub fn phase_oracle(&mut self, formula: &CnfFormula, extra_control: bool) -> Result<(), SimulatorError> {
        let vars = formula.num_variables() as usize;
        let expected = vars + usize::from(extra_control);
        if self.n_qubits != expected {
            return Err(SimulatorError::DimensionMismatch { expected, got: self.n_qubits });
        }
        let masks = formula.clause_masks();
        let control = if extra_control { 1usize << vars } else { 0 };
        par::for_each_indexed(&mut self.amplitudes, |i, a| {
            if i & control == 0 && masks_satisfied(&masks, i as u64) {
                *a = -*a;
            }
        });
        Ok(())
    }

    /// Reflection `2|s⟩⟨s| - I` about the uniform state.
    pub fn grover_diffusion(&mut self) {
        let a = &self.amplitudes;
        let len = a.len();
        let re = par::sum_indexed(len, |i| a[i].re);
        let im = par::sum_indexed(len, |i| a[i].im);
        let twice_mean = Complex64::new(re, im) * (2.0 / len as f64);
        par::for_each_indexed(&mut self.amplitudes, |_, a| *a = twice_mean - *a);
    }

    /// Apply a dense `2^k × 2^k` unitary to `qubits` (qubit `qubits[j]` is
    /// bit `j` of the matrix index).
    pub fn apply_matrix(&mut self, m: &Matrix, qubits: &[usize]) -> Result<(), SimulatorError> {
        for &q in qubits {
            self.check_index(q)?;
        }
        if (1..qubits.len()).any(|i| qubits[..i].contains(&qubits[i])) {
            return Err(SimulatorError::DuplicateQubits);
        }
        let k = qubits.len();
        if m.nrows() != 1 << k || m.ncols() != 1 << k {
            return Err(SimulatorError::DimensionMismatch { expected: 1 << k, got: m.nrows() });
        }
        let deviation = unitarity_deviation(m);
        if deviation > UNITARY_TOL {
            return Err(SimulatorError::NotUnitary(deviation));
        }
        let subset_mask: usize = qubits.iter().map(|q| 1usize << q).sum();
        let scatter = |local: usize| -> usize {
            qubits.iter().enumerate().filter(|(j, _)| local >> j & 1 == 1).map(|(_, q)| 1usize << q).sum()
        };
        let offsets: Vec<usize> = (0..1usize << k).map(scatter).collect();
        let gather = |global: usize| -> usize {
            qubits.iter().enumerate().map(|(j, &q)| (global >> q & 1) << j).sum()
        };
        let src = &self.amplitudes;
        let out = par::map_indexed(src.len(), |i| {
            let row = gather(i);
            let base = i & !subset_mask;
            offsets.iter().enumerate().map(|(col, &off)| m[(row, col)] * src[base | off]).sum::<Complex64>()
        });
        self.amplitudes = out;
        Ok(())
    }

    /// Multinomial draw of `shots` basis states from `|amplitude|²`.
    pub fn sample(&self, shots: usize, seed: RunSeed) -> BTreeMap<Assignment, usize> {
        let weights = self.probabilities();
        let dist = WeightedIndex::new(&weights).expect("normalized state has positive weight");
        let mut rng = seed.rng(stream::SAMPLING);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(dist.sample(&mut rng) as Assignment).or_insert(0) += 1;
        }
        counts
    }

    /// Condition on `qubits[j]` measuring `values[j]`. The selected qubits are
    /// removed; the remaining ones keep their relative order.
    pub fn post_select(&self, qubits: &[usize], values: &[bool]) -> Result<PostSelection, SimulatorError> {
        if qubits.len() != values.len() {
            return Err(SimulatorError::DimensionMismatch { expected: qubits.len(), got: values.len() });
        }
        for &q in qubits {
            self.check_index(q)?;
        }
        if (1..qubits.len()).any(|i| qubits[..i].contains(&qubits[i])) {
            return Err(SimulatorError::DuplicateQubits);
        }
        let select_mask: usize = qubits.iter().map(|q| 1usize << q).sum();
        let select_value: usize = qubits.iter().zip(values).filter(|(_, &v)| v).map(|(q, _)| 1usize << q).sum();
        let kept: Vec<usize> = (0..self.n_qubits).filter(|q| select_mask >> q & 1 == 0).collect();
        let expand = |local: usize| -> usize {
            kept.iter().enumerate().map(|(j, &q)| (local >> j & 1) << q).sum::<usize>() | select_value
        };
        let a = &self.amplitudes;
        let sub: Vec<Complex64> = par::map_indexed(1usize << kept.len(), |i| a[expand(i)]);
        let probability = par::sum_indexed(sub.len(), |i| sub[i].norm_sqr());
        if probability <= f64::MIN_POSITIVE {
            return Ok(PostSelection { state: None, probability: 0.0 });
        }
        let scale = probability.sqrt().recip();
        let amplitudes = sub.into_iter().map(|c| c * scale).collect();
        Ok(PostSelection { state: Some(Statevector { n_qubits: kept.len(), amplitudes }), probability })
    }
}

/// CNOT pairs of the entangling ring.
pub(crate) fn ring(n: usize) -> Vec<(usize, usize)> {
    match n {
        0 | 1 => vec![],
        2 => vec![(0, 1)],
        _ => (0..n).map(|q| (q, (q + 1) % n)).collect(),
    }
}

/// `max |(M†M - I)_ij|`
pub fn unitarity_deviation(m: &Matrix) -> f64 {
    let product = m.adjoint() * m;
    let id = Matrix::identity(m.nrows(), m.ncols());
    (product - id).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{generate_synthetic, Provenance};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn uniform_states() {
        let s = Statevector::uniform_superposition(1).unwrap();
        assert!(s.amplitudes().iter().all(|&a| close(a, Complex64::new(FRAC_1_SQRT_2, 0.0))));
        let s = Statevector::uniform_superposition(2).unwrap();
        assert!(s.amplitudes().iter().all(|&a| close(a, Complex64::new(0.5, 0.0))));
        for n in 1..=20 {
            assert_abs_diff_eq!(Statevector::uniform_superposition(n).unwrap().norm_sqr(), 1.0, epsilon = 1e-10);
        }
        assert_eq!(Statevector::uniform_superposition(0), Err(SimulatorError::QubitCount(0)));
        assert_eq!(Statevector::uniform_superposition(25), Err(SimulatorError::QubitCount(25)));
    }

    #[test]
    fn diagonal_phase() {
        let h = DiagonalHamiltonian::new(1, vec![0.0, 1.0]).unwrap();
        let mut s = Statevector::uniform_superposition(1).unwrap();
        let before = s.clone();
        s.apply_diagonal_phase(&h, 0.0).unwrap();
        assert_eq!(s, before);
        s.apply_diagonal_phase(&h, PI).unwrap();
        assert!(close(s.amplitudes()[0], before.amplitudes()[0]));
        assert!(close(s.amplitudes()[1], -before.amplitudes()[1]));

        let flat = DiagonalHamiltonian::new(2, vec![3.0; 4]).unwrap();
        let mut s = Statevector::from_amplitudes(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.5, 0.0),
        ])
        .unwrap();
        let p = s.probabilities();
        s.apply_diagonal_phase(&flat, 0.7).unwrap();
        for (a, b) in p.iter().zip(s.probabilities()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }

        let wrong = DiagonalHamiltonian::new(2, vec![0.0; 4]).unwrap();
        assert!(Statevector::uniform_superposition(1).unwrap().apply_diagonal_phase(&wrong, 1.0).is_err());
    }

    #[test]
    fn rx_all() {
        let mut s = Statevector::basis(3, 0).unwrap();
        s.apply_rx_all(0.0);
        assert_eq!(s, Statevector::basis(3, 0).unwrap());
        s.apply_rx_all(PI / 2.0);
        assert_abs_diff_eq!(s.amplitudes()[7].norm(), 1.0, epsilon = 1e-12);
        s.apply_rx_all(0.123);
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ansatz_identity_and_param_checks() {
        let mut s = Statevector::basis(3, 0).unwrap();
        s.apply_ansatz(2, &[0.0; 9]).unwrap();
        assert_eq!(s, Statevector::basis(3, 0).unwrap());
        assert_eq!(
            s.apply_ansatz(2, &[0.0; 8]),
            Err(SimulatorError::ParamCount { expected: 9, got: 8 })
        );
        assert!(s.apply_ansatz(2, &[0.0; 10]).is_err());
    }

    #[test]
    fn oracle_marks_solutions() {
        let contradiction = CnfFormula::from_signed(1, &[&[1], &[-1]], Provenance::DimacsFile).unwrap();
        let mut s = Statevector::uniform_superposition(1).unwrap();
        let before = s.clone();
        s.phase_oracle(&contradiction, false).unwrap();
        assert_eq!(s, before);

        let unit = CnfFormula::from_signed(1, &[&[1]], Provenance::DimacsFile).unwrap();
        s.phase_oracle(&unit, false).unwrap();
        assert!(close(s.amplitudes()[1], -before.amplitudes()[1]));
        assert!(close(s.amplitudes()[0], before.amplitudes()[0]));

        let xor = generate_synthetic("xor:2").unwrap();
        let mut s = Statevector::uniform_superposition(3).unwrap();
        s.phase_oracle(&xor, true).unwrap();
        let negated: Vec<usize> = (0..8).filter(|&i| s.amplitudes()[i].re < 0.0).collect();
        assert_eq!(negated, vec![0b001, 0b010]);
        assert!(s.phase_oracle(&xor, false).is_err());
    }

    #[test]
    fn diffusion_reflects() {
        let mut s = Statevector::uniform_superposition(3).unwrap();
        let u = s.clone();
        s.grover_diffusion();
        assert!(s.amplitudes().iter().zip(u.amplitudes()).all(|(a, b)| close(*a, *b)));

        // |0⟩ - |1⟩ is orthogonal to uniform
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let mut s = Statevector::from_amplitudes(vec![h, -h]).unwrap();
        s.grover_diffusion();
        assert!(close(s.amplitudes()[0], -h) && close(s.amplitudes()[1], h));
    }

    #[test]
    fn one_grover_iteration_on_two_qubits() {
        let f = CnfFormula::from_signed(2, &[&[1], &[-2]], Provenance::DimacsFile).unwrap();
        let mut s = Statevector::uniform_superposition(2).unwrap();
        s.phase_oracle(&f, false).unwrap();
        s.grover_diffusion();
        assert_abs_diff_eq!(s.probabilities()[0b01], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn apply_matrix_basics() {
        let mut s = Statevector::basis(2, 0).unwrap();
        s.apply_matrix(&Matrix::identity(2, 2), &[1]).unwrap();
        assert_eq!(s, Statevector::basis(2, 0).unwrap());
        let x = Matrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        s.apply_matrix(&x, &[0]).unwrap();
        assert_abs_diff_eq!(s.probabilities()[0b01], 1.0, epsilon = 1e-15);

        let bad = Matrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(s.apply_matrix(&bad, &[0]), Err(SimulatorError::NotUnitary(_))));
        assert_eq!(s.apply_matrix(&x, &[0, 0]), Err(SimulatorError::DuplicateQubits));
    }

    #[test]
    fn apply_matrix_matches_gate_kernels() {
        // CNOT with control qubit 2 and target qubit 0, as a 4×4 on [0, 2]
        let mut cnot = Matrix::zeros(4, 4);
        for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            cnot[(r, c)] = ONE;
        }
        let mut a = Statevector::uniform_superposition(3).unwrap();
        a.apply_ry(0, 0.3).unwrap();
        a.apply_ry(2, 1.1).unwrap();
        let mut b = a.clone();
        a.apply_matrix(&cnot, &[0, 2]).unwrap();
        b.apply_cnot(2, 0).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!(close(*x, *y));
        }
    }

    #[test]
    fn sampling() {
        let s = Statevector::basis(3, 5).unwrap();
        assert_eq!(s.sample(100, RunSeed(1)), BTreeMap::from([(5, 100)]));
        let u = Statevector::uniform_superposition(2).unwrap();
        assert_eq!(u.sample(1000, RunSeed(9)), u.sample(1000, RunSeed(9)));
    }

    #[test]
    fn post_selection() {
        // ancilla (qubit 1) in |0⟩, system qubit 0 in |+⟩
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let s = Statevector::from_amplitudes(vec![h, h, ZERO, ZERO]).unwrap();
        let ps = s.post_select(&[1], &[false]).unwrap();
        assert_abs_diff_eq!(ps.probability, 1.0, epsilon = 1e-15);
        assert_eq!(ps.state.unwrap(), Statevector::from_amplitudes(vec![h, h]).unwrap());
        let ps = s.post_select(&[1], &[true]).unwrap();
        assert_eq!(ps.probability, 0.0);
        assert!(ps.state.is_none());

        let bell = Statevector::from_amplitudes(vec![h, ZERO, ZERO, h]).unwrap();
        let ps = bell.post_select(&[0], &[false]).unwrap();
        assert_abs_diff_eq!(ps.probability, 0.5, epsilon = 1e-15);
        let rest = ps.state.unwrap();
        assert_eq!(rest.n_qubits(), 1);
        assert_abs_diff_eq!(rest.probabilities()[0], 1.0, epsilon = 1e-15);
    }
}
