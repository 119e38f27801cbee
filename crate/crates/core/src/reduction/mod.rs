//! CNF → QUBO → Ising.
//!
//! Every clause becomes a non-negative integer penalty that vanishes exactly
//! on satisfying assignments; clauses wider than two literals are first
//! narrowed with auxiliary variables. Integer coefficients give the integer
//! gap: the objective is `0` on solutions and at least `1` everywhere else.

mod gap;
mod ising;
mod poly;
mod qubo;

use thiserror::Error;

pub use gap::{compute_gap, compute_gap_with_budget, GapInfo};
pub use ising::{qubo_to_ising, IsingModel};
pub use poly::{clause_penalty, reduction_gadget, QuadPoly, QuboLiteral};
pub use qubo::{cnf_to_qubo, PenaltyTerms, Qubo, QuboJson, VarOrigin};

pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("clause of width {0} must be narrowed before taking its penalty")]
    ClauseTooWide(usize),
    #[error("integer overflow while accumulating QUBO coefficients")]
    Overflow,
    #[error("exact gap needs {n} variables but the exhaustive budget is {budget}")]
    BudgetExceeded { n: usize, budget: usize },
    #[error("invalid QUBO: {0}")]
    Invalid(String),
}

/// Serialize rationals as `"p/q"` (or `"p"` for integers).
pub(crate) mod ratio_text {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(|_| D::Error::custom(format!("invalid rational `{text}`")))
    }

    pub mod vec {
        use super::super::Rational;
        use serde::{ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&r.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|t| t.parse().map_err(|_| serde::de::Error::custom(format!("invalid rational `{t}`"))))
                .collect()
        }
    }
}
