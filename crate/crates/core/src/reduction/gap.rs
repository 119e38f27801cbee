use serde::Serialize;

use super::{ratio_text, Qubo, Rational, ReductionError};
use crate::oracle::{self, DEFAULT_BUDGET};

/// Scale and gap of a reduced QUBO.
///
/// `bound_m` caps the objective by summing per-term maxima, so `H / bound_m`
/// has spectrum in `[0, 1]` and every non-solution sits at or above
/// `estimated_gap = 1 / bound_m`. The exact variant scales by the true
/// maximum instead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapInfo {
    #[serde(rename = "M")]
    pub bound_m: u64,
    #[serde(with = "ratio_text")]
    pub estimated: Rational,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_ratio")]
    pub exact: Option<Rational>,
    /// Largest objective value, when computed exhaustively.
    #[serde(skip)]
    pub exact_max: Option<i64>,
}

fn opt_ratio<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

impl GapInfo {
    /// `(scale, gap)` to use for the filter: the exact pair when known,
    /// else `(M, 1/M)`.
    pub fn filter_scale(&self) -> (u64, Rational) {
        match (self.exact_max, self.exact) {
            (Some(max), Some(gap)) if max > 0 => (max as u64, gap),
            _ => (self.bound_m, self.estimated),
        }
    }
}

/// Per-term bound: a narrowed clause penalty is at most 1, a gadget at most
/// 3. `bound_m` is floored at 1 so the empty objective still has a scale.
pub fn compute_gap(q: &Qubo, exact: bool) -> Result<GapInfo, ReductionError> {
    compute_gap_with_budget(q, exact, DEFAULT_BUDGET)
}

pub fn compute_gap_with_budget(q: &Qubo, exact: bool, budget: usize) -> Result<GapInfo, ReductionError> {
    let terms = q.penalty_terms();
    let bound_m = (terms.clauses as u64 + 3 * terms.gadgets as u64).max(1);
    let estimated = Rational::new(1, bound_m as i64);
    let mut info = GapInfo { bound_m, estimated, exact: None, exact_max: None };
    if exact {
        if q.n() > budget {
            return Err(ReductionError::BudgetExceeded { n: q.n(), budget });
        }
        let spectrum = oracle::qubo_spectrum_with_budget(q, budget)
            .map_err(|_| ReductionError::BudgetExceeded { n: q.n(), budget })?;
        info.exact_max = Some(spectrum.max_value);
        let smallest_nonzero = spectrum.value_histogram.keys().copied().find(|&v| v > 0);
        info.exact = smallest_nonzero.map(|v| Rational::new(v, spectrum.max_value));
    }
    Ok(info)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{CnfFormula, Provenance};
    use crate::reduction::cnf_to_qubo;

    fn gap_of(clauses: &[&[i64]], n: u32) -> GapInfo {
        let f = CnfFormula::from_signed(n, clauses, Provenance::DimacsFile).unwrap();
        compute_gap(&cnf_to_qubo(&f).unwrap(), true).unwrap()
    }

    #[test]
    fn single_clause_bounds() {
        let g = gap_of(&[&[1, 2]], 2);
        assert_eq!((g.bound_m, g.estimated), (1, Rational::from_integer(1)));
        assert_eq!(g.exact, Some(Rational::from_integer(1)));

        let g = gap_of(&[&[1, 2, 3]], 3);
        assert_eq!((g.bound_m, g.estimated), (4, Rational::new(1, 4)));
        // best possible: min nonzero 1 over max 4
        assert_eq!(g.exact, Some(Rational::new(1, 4)));
        assert_eq!(g.filter_scale(), (4, Rational::new(1, 4)));
    }

    #[test]
    fn exact_respects_budget() {
        let q = Qubo::zero(30);
        assert!(matches!(compute_gap(&q, true), Err(ReductionError::BudgetExceeded { .. })));
        let g = compute_gap(&Qubo::zero(3), true).unwrap();
        assert_eq!((g.bound_m, g.exact, g.exact_max), (1, None, Some(0)));
    }
}
