use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Minimum, OptimizerSpec, Tracker};

/// Gains `a_k = a / (k + 1 + A)^alpha`, `c_k = c / (k + 1)^gamma`, with `a`
/// calibrated so the first step has roughly `target_step` magnitude.
#[derive(Clone, Debug)]
pub struct Spsa {
    pub alpha: f64,
    pub gamma: f64,
    pub c: f64,
    pub stability: f64,
    pub target_step: f64,
    pub calibration_samples: usize,
}

impl Default for Spsa {
    fn default() -> Self {
        Spsa {
            alpha: 0.602,
            gamma: 0.101,
            c: 0.2,
            stability: 0.0,
            target_step: std::f64::consts::TAU / 10.0,
            calibration_samples: 10,
        }
    }
}

fn rademacher(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
}

fn shifted(x: &[f64], delta: &[f64], scale: f64) -> Vec<f64> {
    x.iter().zip(delta).map(|(xi, di)| xi + scale * di).collect()
}

impl Spsa {
    pub fn minimize<F>(&self, spec: &OptimizerSpec, f: F, x0: Vec<f64>, rng: &mut ChaCha8Rng) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        let mut t = Tracker::new(f, &x0);
        let mut x = x0;
        let mut trace = Vec::with_capacity(spec.max_iterations);

        let f0 = t.eval(&x);
        trace.push((0, f0));
        if t.diverged || f0 <= spec.tolerance || n == 0 {
            return t.finish(trace);
        }

        // mean |f(x + cΔ) - f(x - cΔ)| / 2c over a few random directions
        let mut magnitude = 0.0;
        for _ in 0..self.calibration_samples {
            let delta = rademacher(rng, n);
            let plus = t.eval(&shifted(&x, &delta, self.c));
            let minus = t.eval(&shifted(&x, &delta, -self.c));
            magnitude += (plus - minus).abs() / (2.0 * self.c);
        }
        magnitude /= self.calibration_samples as f64;
        if t.diverged {
            return t.finish(trace);
        }
        let a = if magnitude > 1e-12 {
            self.target_step * (self.stability + 1.0).powf(self.alpha) / magnitude
        } else {
            self.target_step
        };

        for k in 0..spec.max_iterations {
            let ak = a / (k as f64 + 1.0 + self.stability).powf(self.alpha);
            let ck = self.c / (k as f64 + 1.0).powf(self.gamma);
            let delta = rademacher(rng, n);
            let plus = t.eval(&shifted(&x, &delta, ck));
            let minus = t.eval(&shifted(&x, &delta, -ck));
            let slope = (plus - minus) / (2.0 * ck);
            // Δ_i = ±1, so 1/Δ_i = Δ_i
            for (xi, di) in x.iter_mut().zip(&delta) {
                *xi -= ak * slope * di;
            }
            t.eval(&x);
            trace.push((k + 1, t.best));
            if t.diverged || t.best <= spec.tolerance {
                break;
            }
        }
        t.finish(trace)
    }
}
