use super::SimulatorError;
use crate::par;
use crate::reduction::{IsingModel, Qubo};

/// Real diagonal operator: `values[x]` is the energy of basis state `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalHamiltonian {
    n_qubits: usize,
    values: Vec<f64>,
}

impl DiagonalHamiltonian {
    pub fn new(n_qubits: usize, values: Vec<f64>) -> Result<Self, SimulatorError> {
        if values.len() != 1usize << n_qubits {
            return Err(SimulatorError::DimensionMismatch { expected: 1 << n_qubits, got: values.len() });
        }
        Ok(DiagonalHamiltonian { n_qubits, values })
    }

    /// `values[x] = x^T Q x + c`.
    pub fn from_qubo(q: &Qubo) -> Self {
        let values = par::map_indexed(1usize << q.n(), |x| q.objective(x as u64) as f64);
        DiagonalHamiltonian { n_qubits: q.n(), values }
    }

    pub fn from_ising(ising: &IsingModel) -> Self {
        let values = par::map_indexed(1usize << ising.n(), |x| ising.energy_f64(x as u64));
        DiagonalHamiltonian { n_qubits: ising.n(), values }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}
