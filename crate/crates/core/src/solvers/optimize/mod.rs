//! Derivative-free minimizers for the variational solvers.

mod spsa;
mod trust_region;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use spsa::Spsa;
pub use trust_region::LinearTrustRegion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerKind {
    /// Simultaneous-perturbation stochastic approximation.
    Spsa,
    /// Linear-model trust region over a simplex of sample points.
    TrustRegion,
}

impl OptimizerKind {
    pub fn name(self) -> &'static str {
        match self {
            OptimizerKind::Spsa => "spsa",
            OptimizerKind::TrustRegion => "trust-region",
        }
    }
}

impl std::str::FromStr for OptimizerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spsa" => Ok(OptimizerKind::Spsa),
            "trust-region" | "cobyla" => Ok(OptimizerKind::TrustRegion),
            _ => Err(format!("unknown optimizer `{s}` (expected spsa or trust-region)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSpec {
    pub kind: OptimizerKind,
    pub max_iterations: usize,
    /// Stop as soon as the objective reaches this value or lower.
    pub tolerance: f64,
}

impl OptimizerSpec {
    pub fn new(kind: OptimizerKind, max_iterations: usize) -> Self {
        OptimizerSpec { kind, max_iterations: max_iterations.max(1), tolerance: 1e-6 }
    }

    pub fn minimize<F>(&self, f: F, x0: Vec<f64>, rng: &mut ChaCha8Rng) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        match self.kind {
            OptimizerKind::Spsa => Spsa::default().minimize(self, f, x0, rng),
            OptimizerKind::TrustRegion => LinearTrustRegion::default().minimize(self, f, x0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    /// Starting value at iteration 0, then the best value seen after each
    /// iteration.
    pub trace: Vec<(usize, f64)>,
    pub evaluations: usize,
    /// A non-finite objective value stopped the run.
    pub diverged: bool,
}

/// Tracks the best point and counts evaluations.
pub(crate) struct Tracker<F> {
    f: F,
    pub best_x: Vec<f64>,
    pub best: f64,
    pub evaluations: usize,
    pub diverged: bool,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    pub fn new(f: F, x0: &[f64]) -> Self {
        Tracker { f, best_x: x0.to_vec(), best: f64::INFINITY, evaluations: 0, diverged: false }
    }

    pub fn eval(&mut self, x: &[f64]) -> f64 {
        let v = (self.f)(x);
        self.evaluations += 1;
        if !v.is_finite() {
            self.diverged = true;
        } else if v < self.best {
            self.best = v;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
        }
        v
    }

    pub fn finish(self, trace: Vec<(usize, f64)>) -> Minimum {
        Minimum { x: self.best_x, value: self.best, trace, evaluations: self.evaluations, diverged: self.diverged }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, RunSeed};

    fn bowl(x: &[f64]) -> f64 {
        (x[0] - 0.7).powi(2) + 2.0 * (x[1] + 0.3).powi(2) + 0.5 * (x[2] - 0.1).powi(2)
    }

    #[test]
    fn both_optimizers_descend_a_quadratic() {
        for kind in [OptimizerKind::Spsa, OptimizerKind::TrustRegion] {
            let mut spec = OptimizerSpec::new(kind, 300);
            spec.tolerance = 1e-8;
            let mut rng = RunSeed(3).rng(stream::OPTIMIZER);
            let m = spec.minimize(bowl, vec![0.0, 0.0, 0.0], &mut rng);
            assert!(m.value < 1e-3, "{kind:?} reached {}", m.value);
            assert!(m.trace.windows(2).all(|w| w[1].1 <= w[0].1), "{kind:?} trace not monotone");
            assert!(m.trace.len() <= 301);
        }
    }

    #[test]
    fn divergence_is_reported() {
        let mut rng = RunSeed(1).rng(stream::OPTIMIZER);
        for kind in [OptimizerKind::Spsa, OptimizerKind::TrustRegion] {
            let m = OptimizerSpec::new(kind, 50).minimize(|_| f64::NAN, vec![0.0], &mut rng);
            assert!(m.diverged);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in [OptimizerKind::Spsa, OptimizerKind::TrustRegion] {
            assert_eq!(k.name().parse::<OptimizerKind>().unwrap(), k);
        }
        assert!("bfgs".parse::<OptimizerKind>().is_err());
    }
}
