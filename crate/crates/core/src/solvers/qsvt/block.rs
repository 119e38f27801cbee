use num_complex::Complex64;

use super::super::SolverError;
use crate::par;
use crate::reduction::{GapInfo, IsingModel};
use crate::simulator::{Matrix, SimulatorError, Statevector};

/// Tolerance for the `[0, 1]` range check of scaled entries.
const RANGE_TOL: f64 = 1e-12;

/// Diagonal `A = H / scale` with entries in `[0, 1]`, embedded as the top-left
/// block of `U′ = [[A, √(I - A²)], [√(I - A²), -A]]`. The block index is an
/// extra qubit placed above the system register.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockEncoding {
    n_qubits: usize,
    diagonal: Vec<f64>,
}

fn check_range(values: &[f64]) -> Result<(), SolverError> {
    match values.iter().position(|v| !(-RANGE_TOL..=1.0 + RANGE_TOL).contains(v)) {
        Some(index) => Err(SolverError::BoundViolated { index, value: values[index] }),
        None => Ok(()),
    }
}

/// Scale the Ising energies by the gap's filter scale (`bound_M`, or the exact
/// maximum when known).
pub fn build_block_encoding(ising: &IsingModel, gap: &GapInfo) -> Result<BlockEncoding, SolverError> {
    let scale = gap.filter_scale().0 as f64;
    let diagonal = par::map_indexed(1usize << ising.n(), |x| ising.energy_f64(x as u64) / scale);
    BlockEncoding::from_diagonal(diagonal)
}

impl BlockEncoding {
    pub fn from_diagonal(diagonal: Vec<f64>) -> Result<Self, SolverError> {
        let len = diagonal.len();
        if !len.is_power_of_two() {
            return Err(SimulatorError::DimensionMismatch { expected: len.next_power_of_two(), got: len }.into());
        }
        check_range(&diagonal)?;
        let diagonal = diagonal.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(BlockEncoding { n_qubits: len.trailing_zeros() as usize, diagonal })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Dense `U′` of size `2^(n+1)`; already a power of two, so no padding.
    pub fn to_dense(&self) -> Matrix {
        let half = self.diagonal.len();
        let mut u = Matrix::zeros(2 * half, 2 * half);
        for (i, &a) in self.diagonal.iter().enumerate() {
            let s = (1.0 - a * a).max(0.0).sqrt();
            u[(i, i)] = Complex64::new(a, 0.0);
            u[(i, i + half)] = Complex64::new(s, 0.0);
            u[(i + half, i)] = Complex64::new(s, 0.0);
            u[(i + half, i + half)] = Complex64::new(-a, 0.0);
        }
        u
    }

    /// Apply the block encoding of `g(A)` to a state on `n + 1` qubits: for
    /// each system index `x`, the ancilla pair is rotated by
    /// `[[g(a), √(1 - g(a)²)], [√(1 - g(a)²), -g(a)]]` with `a = A[x]`.
    pub fn apply_with(&self, state: &mut Statevector, g: impl Fn(f64) -> f64 + Sync) -> Result<(), SolverError> {
        if state.n_qubits() != self.n_qubits + 1 {
            return Err(SimulatorError::DimensionMismatch { expected: self.n_qubits + 1, got: state.n_qubits() }.into());
        }
        let values: Vec<f64> = par::map_indexed(self.diagonal.len(), |x| g(self.diagonal[x]));
        if let Some(index) = values.iter().position(|v| v.is_nan() || v.abs() > 1.0 + 1e-9) {
            return Err(SolverError::InvalidFilter(format!("|g(A[{index}])| = {} exceeds 1", values[index].abs())));
        }
        let half = self.diagonal.len();
        let (lo, hi) = state.amplitudes_mut().split_at_mut(half);
        par::for_each_pair(lo, hi, |x, a, b| {
            let v = values[x].clamp(-1.0, 1.0);
            let s = (1.0 - v * v).max(0.0).sqrt();
            let (p, q) = (*a, *b);
            *a = p * v + q * s;
            *b = p * s - q * v;
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::unitarity_deviation;

    #[test]
    fn two_level_example() {
        let be = BlockEncoding::from_diagonal(vec![0.0, 0.5]).unwrap();
        let u = be.to_dense();
        let r = 0.75f64.sqrt();
        let expected = [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.5, 0.0, r],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, r, 0.0, -0.5],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((u[(i, j)] - Complex64::new(expected[i][j], 0.0)).norm() < 1e-12);
            }
        }
        assert!(unitarity_deviation(&u) < 1e-12);
    }

    #[test]
    fn out_of_range_entry_rejected() {
        assert!(matches!(
            BlockEncoding::from_diagonal(vec![0.0, 1.5]),
            Err(SolverError::BoundViolated { index: 1, .. })
        ));
    }

    #[test]
    fn apply_matches_dense_matrix() {
        let be = BlockEncoding::from_diagonal(vec![0.0, 0.25, 0.5, 1.0]).unwrap();
        let mut fast = Statevector::uniform_superposition(3).unwrap();
        let mut dense = fast.clone();
        be.apply_with(&mut fast, |a| a).unwrap();
        dense.apply_matrix(&be.to_dense(), &[0, 1, 2]).unwrap();
        for (a, b) in fast.amplitudes().iter().zip(dense.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
