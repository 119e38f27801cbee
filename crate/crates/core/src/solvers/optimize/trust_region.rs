use nalgebra::{DMatrix, DVector};

use super::{Minimum, OptimizerSpec, Tracker};

/// Unconstrained linear-approximation trust region.
///
/// Keeps `n + 1` interpolation points, fits the linear model through them and
/// steps a distance `radius` against its gradient from the best point. A
/// failed step on a freshly built simplex halves the radius; the run ends when
/// the radius drops below `final_radius`.
#[derive(Clone, Debug)]
pub struct LinearTrustRegion {
    pub initial_radius: f64,
    pub shrink: f64,
    pub final_radius: f64,
}

impl Default for LinearTrustRegion {
    fn default() -> Self {
        LinearTrustRegion { initial_radius: 0.5, shrink: 0.5, final_radius: 1e-4 }
    }
}

struct Simplex {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Simplex {
    fn best(&self) -> usize {
        argmin(&self.values)
    }

    fn worst(&self) -> usize {
        (0..self.values.len())
            .max_by(|&a, &b| self.values[a].total_cmp(&self.values[b]))
            .unwrap()
    }

    /// Gradient of the interpolating linear model, `None` if degenerate.
    fn gradient(&self) -> Option<DVector<f64>> {
        let b = self.best();
        let n = self.points[0].len();
        let others: Vec<usize> = (0..self.points.len()).filter(|&i| i != b).collect();
        let d = DMatrix::from_fn(n, n, |r, c| self.points[others[r]][c] - self.points[b][c]);
        let df = DVector::from_fn(n, |r, _| self.values[others[r]] - self.values[b]);
        d.lu().solve(&df).filter(|g| g.iter().all(|v| v.is_finite()))
    }
}

fn argmin(v: &[f64]) -> usize {
    (0..v.len()).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap()
}

impl LinearTrustRegion {
    fn build<F: FnMut(&[f64]) -> f64>(t: &mut Tracker<F>, center: &[f64], center_value: f64, radius: f64) -> Simplex {
        let mut points = vec![center.to_vec()];
        let mut values = vec![center_value];
        for i in 0..center.len() {
            let mut p = center.to_vec();
            p[i] += radius;
            values.push(t.eval(&p));
            points.push(p);
        }
        Simplex { points, values }
    }

    pub fn minimize<F>(&self, spec: &OptimizerSpec, f: F, x0: Vec<f64>) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let mut t = Tracker::new(f, &x0);
        let mut trace = Vec::with_capacity(spec.max_iterations);
        let f0 = t.eval(&x0);
        trace.push((0, f0));
        if t.diverged || f0 <= spec.tolerance || x0.is_empty() {
            return t.finish(trace);
        }

        let mut radius = self.initial_radius;
        let mut simplex = Self::build(&mut t, &x0, f0, radius);
        let mut fresh = true;

        for k in 0..spec.max_iterations {
            if t.diverged || radius < self.final_radius {
                break;
            }
            let b = simplex.best();
            let (center, center_value) = (simplex.points[b].clone(), simplex.values[b]);
            let gradient = simplex.gradient();
            let step = gradient.as_ref().and_then(|g| {
                let norm = g.norm();
                (norm > 1e-12).then(|| center.iter().zip(g.iter()).map(|(c, gi)| c - radius * gi / norm).collect::<Vec<_>>())
            });

            let improved = match step {
                Some(trial) => {
                    let value = t.eval(&trial);
                    let w = simplex.worst();
                    let better = value < center_value;
                    if better || value < simplex.values[w] {
                        simplex.points[w] = trial;
                        simplex.values[w] = value;
                    }
                    better
                }
                None => false,
            };

            if improved {
                fresh = false;
            } else {
                if fresh {
                    radius *= self.shrink;
                }
                if radius >= self.final_radius {
                    simplex = Self::build(&mut t, &center, center_value, radius);
                    fresh = true;
                }
            }
            trace.push((k + 1, t.best));
            if t.best <= spec.tolerance {
                break;
            }
        }
        t.finish(trace)
    }
}
