use serde::Serialize;

use super::super::SolverError;

/// Largest half degree [`choose_degree`] will consider.
pub const DEGREE_CAP: u32 = 200;

/// `F(x) = T_d(y(x)) / T_d(y(0))` with `y(x) = 2(x² - δ²)/(1 - δ²) - 1`.
///
/// `F` has degree `2d`, equals 1 at 0 and is bounded by `1 / |T_d(y(0))|` on
/// `[δ, 1]`, so it approximates the indicator of `{0}` on the spectrum of a
/// matrix whose nonzero eigenvalues are at least `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FilterPolynomial {
    half_degree: u32,
    gap: f64,
}

fn ln_cosh(t: f64) -> f64 {
    let t = t.abs();
    t + (-2.0 * t).exp().ln_1p() - std::f64::consts::LN_2
}

impl FilterPolynomial {
    pub fn new(half_degree: u32, gap: f64) -> Result<Self, SolverError> {
        if half_degree == 0 {
            return Err(SolverError::InvalidFilter("half degree must be positive".into()));
        }
        if !(gap > 0.0 && gap < 1.0) {
            return Err(SolverError::InvalidFilter(format!("gap {gap} outside (0, 1)")));
        }
        Ok(FilterPolynomial { half_degree, gap })
    }

    pub fn half_degree(&self) -> u32 {
        self.half_degree
    }

    pub fn degree(&self) -> u32 {
        2 * self.half_degree
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    fn argument(&self, x: f64) -> f64 {
        let d2 = self.gap * self.gap;
        2.0 * (x * x - d2) / (1.0 - d2) - 1.0
    }

    /// `(ln|F(x)|, sign)`, stable for large degrees.
    fn ln_abs(&self, x: f64) -> (f64, f64) {
        let d = self.half_degree as f64;
        let y = self.argument(x);
        let y0 = self.argument(0.0);
        let ln_den = ln_cosh(d * y0.abs().acosh());
        // T_d(y0) has sign (-1)^d since y0 <= -1
        let den_sign = if self.half_degree.is_multiple_of(2) { 1.0 } else { -1.0 };
        if y.abs() <= 1.0 {
            let t = (d * y.acos()).cos();
            (t.abs().ln() - ln_den, t.signum() * den_sign)
        } else {
            let num_sign = if y < 0.0 { den_sign } else { 1.0 };
            (ln_cosh(d * y.abs().acosh()) - ln_den, num_sign * den_sign)
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (ln, sign) = self.ln_abs(x);
        sign * ln.exp()
    }

    /// `log2 μ` with `μ = F(0)² / max_{j=1..⌊1/δ⌋} F(jδ)²`.
    pub fn log2_mu(&self) -> f64 {
        let points = (1.0 / self.gap).floor() as u64;
        let worst = (1..=points)
            .map(|j| self.ln_abs((j as f64 * self.gap).min(1.0)).0)
            .fold(f64::NEG_INFINITY, f64::max);
        -2.0 * worst / std::f64::consts::LN_2
    }

    pub fn mu(&self) -> f64 {
        self.log2_mu().exp2()
    }

    /// Largest `F(x)²` over `[δ, 1]`, reached at `x = δ`.
    pub fn leakage_bound(&self) -> f64 {
        self.eval(self.gap).powi(2)
    }

    /// Capacity check: `1 + log2 μ ≥ n`.
    pub fn admits(&self, n_qubits: usize) -> bool {
        1.0 + self.log2_mu() >= n_qubits as f64
    }
}

pub fn filter_quality_mu(f: &FilterPolynomial) -> f64 {
    f.mu()
}

/// Smallest half degree with `μ ≥ 2^n`.
pub fn choose_degree(gap: f64, n_qubits: usize) -> Result<u32, SolverError> {
    for d in 1..=DEGREE_CAP {
        if FilterPolynomial::new(d, gap)?.log2_mu() >= n_qubits as f64 {
            return Ok(d);
        }
    }
    Err(SolverError::DegreeCapExceeded { gap, n_qubits, cap: DEGREE_CAP })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_expansion() {
        let f = FilterPolynomial::new(1, 0.5).unwrap();
        assert_eq!(f.eval(0.0), 1.0);
        assert!((f.eval(0.5) - 0.6).abs() < 1e-12);
        assert!((f.eval(1.0) + 0.6).abs() < 1e-12);
        for x in [0.1, 0.3, 0.8] {
            let closed = (1.0 + 0.25 - 2.0 * x * x) / 1.25;
            assert!((f.eval(x) - closed).abs() < 1e-12);
        }
        assert!((f.mu() - 1.0 / 0.36).abs() < 1e-9);
    }

    #[test]
    fn value_at_zero_is_one() {
        for d in [1, 2, 7, 50, 200] {
            for gap in [0.01, 0.25, 0.5, 0.9, 0.999] {
                assert_eq!(FilterPolynomial::new(d, gap).unwrap().eval(0.0), 1.0);
            }
        }
    }

    #[test]
    fn large_degree_suppression() {
        let f = FilterPolynomial::new(26, 1.0 / 6.0).unwrap();
        assert!(f.eval(1.0 / 6.0).abs() < 1e-3);
        let big = FilterPolynomial::new(200, 0.9).unwrap();
        assert!(big.eval(0.95).is_finite() && big.log2_mu().is_finite());
    }

    #[test]
    fn degree_choice() {
        assert!(choose_degree(0.25, 4).unwrap() <= 12);
        assert_eq!(choose_degree(0.99, 1).unwrap(), 1);
        assert!(matches!(choose_degree(0.01, 20), Err(SolverError::DegreeCapExceeded { .. })));
        let d = choose_degree(0.25, 4).unwrap();
        assert!(FilterPolynomial::new(d, 0.25).unwrap().admits(4));
        assert!(d == 1 || FilterPolynomial::new(d - 1, 0.25).unwrap().log2_mu() < 4.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FilterPolynomial::new(0, 0.5).is_err());
        assert!(FilterPolynomial::new(3, 0.0).is_err());
        assert!(FilterPolynomial::new(3, 1.0).is_err());
    }
}
