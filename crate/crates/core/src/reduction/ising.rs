use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{ratio_text, Qubo, Rational};
use crate::Assignment;

/// `E(z) = Σ h_i z_i + Σ_{i<j} J_ij z_i z_j + offset` over spins `z_i = ±1`.
///
/// Basis index bit `i = 0` is spin `z_i = +1`, matching `x_i = (1 - z_i) / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsingModel {
    #[serde(with = "ratio_text::vec")]
    pub fields: Vec<Rational>,
    pub couplings: Vec<Coupling>,
    #[serde(with = "ratio_text")]
    pub offset: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    #[serde(with = "ratio_text")]
    pub value: Rational,
}

impl IsingModel {
    pub fn n(&self) -> usize {
        self.fields.len()
    }

    fn spin(bits: Assignment, i: usize) -> i64 {
        if bits >> i & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Exact energy of the basis state `bits`.
    pub fn energy(&self, bits: Assignment) -> Rational {
        let mut e = self.offset;
        for (i, h) in self.fields.iter().enumerate() {
            e += h * Self::spin(bits, i);
        }
        for c in &self.couplings {
            e += c.value * (Self::spin(bits, c.i) * Self::spin(bits, c.j));
        }
        e
    }

    /// Energy as a float; all coefficients are quarter-integers so the sum is
    /// exact in `f64` at any realistic magnitude.
    pub fn energy_f64(&self, bits: Assignment) -> f64 {
        let f = |r: &Rational| *r.numer() as f64 / *r.denom() as f64;
        let mut e = f(&self.offset);
        for (i, h) in self.fields.iter().enumerate() {
            e += f(h) * Self::spin(bits, i) as f64;
        }
        for c in &self.couplings {
            e += f(&c.value) * (Self::spin(bits, c.i) * Self::spin(bits, c.j)) as f64;
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.offset.is_zero()
            && self.fields.iter().all(Zero::is_zero)
            && self.couplings.iter().all(|c| c.value.is_zero())
    }
}

/// Substitute `x_i = (1 - z_i) / 2`:
/// `a·x_i ↦ a/2 - (a/2)·z_i` and
/// `b·x_i x_j ↦ b/4 · (1 - z_i - z_j + z_i z_j)`.
pub fn qubo_to_ising(q: &Qubo) -> IsingModel {
    let half = Rational::new(1, 2);
    let quarter = Rational::new(1, 4);
    let mut fields = vec![Rational::zero(); q.n()];
    let mut offset = Rational::from_integer(q.offset());
    for (i, &a) in q.linear().iter().enumerate() {
        let a = Rational::from_integer(a);
        offset += a * half;
        fields[i] -= a * half;
    }
    let mut couplings = Vec::with_capacity(q.quadratic().len());
    for &(i, j, b) in q.quadratic() {
        let b = Rational::from_integer(b) * quarter;
        offset += b;
        fields[i] -= b;
        fields[j] -= b;
        couplings.push(Coupling { i, j, value: b });
    }
    IsingModel { fields, couplings, offset }
}
