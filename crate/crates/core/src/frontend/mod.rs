//! CNF formulas and the three ways of obtaining one: DIMACS text, an external
//! bounded model checker, and built-in synthetic generators.

mod checker;
mod dimacs;
pub mod synthetic;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Assignment;

pub use checker::{run_model_checker, Check, CheckerConfig, FlagTable, CHECKER_ENV};
pub use dimacs::{emit_dimacs, parse_dimacs};
pub use synthetic::{generate_synthetic, Synthetic};

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("literal {literal} exceeds the declared {num_variables} variables")]
    VariableOutOfRange { literal: i64, num_variables: u32 },
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("clause contains both polarities of variable {0}")]
    TautologicalClause(u32),
    #[error("empty clause")]
    EmptyClause,
    #[error("model checker `{0}` is not available")]
    CheckerUnavailable(String),
    #[error("model checker exited with {status} and produced no DIMACS output: {stderr}")]
    CheckerFailed { status: String, stderr: String },
    #[error("invalid checker configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown synthetic instance `{0}`")]
    UnknownInstance(String),
    #[error("invalid parameters for `{name}`: {message}")]
    InvalidParams { name: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub variable: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(variable: u32) -> Self {
        Literal { variable, negated: false }
    }

    pub fn neg(variable: u32) -> Self {
        Literal { variable, negated: true }
    }

    /// Signed DIMACS form; `None` for `0`.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        let variable = u32::try_from(value.unsigned_abs()).ok().filter(|&v| v > 0)?;
        Some(Literal { variable, negated: value < 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.variable as i64)
        } else {
            self.variable as i64
        }
    }

    /// Truth value under an assignment mask (bit `variable - 1`).
    #[inline]
    pub fn eval(self, bits: Assignment) -> bool {
        (bits >> (self.variable - 1) & 1 == 1) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.variable)
        } else {
            write!(f, "x{}", self.variable)
        }
    }
}

/// A disjunction of literals over distinct variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Repeated literals are merged; both polarities of one variable is an
    /// error.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self, FrontendError> {
        let mut out: Vec<Literal> = Vec::new();
        for lit in literals {
            match out.iter().find(|l| l.variable == lit.variable) {
                Some(l) if l.negated == lit.negated => {}
                Some(_) => return Err(FrontendError::TautologicalClause(lit.variable)),
                None => out.push(lit),
            }
        }
        if out.is_empty() {
            return Err(FrontendError::EmptyClause);
        }
        Ok(Clause { literals: out })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    #[inline]
    pub fn eval(&self, bits: Assignment) -> bool {
        self.literals.iter().any(|l| l.eval(bits))
    }

    fn sorted(&self) -> Vec<Literal> {
        let mut v = self.literals.clone();
        v.sort();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    DimacsFile,
    ModelChecker,
    Synthetic(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::DimacsFile => f.write_str("dimacs-file"),
            Provenance::ModelChecker => f.write_str("model-checker"),
            Provenance::Synthetic(name) => write!(f, "synthetic:{name}"),
        }
    }
}

impl Serialize for Provenance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Conjunction of clauses over variables `1..=num_variables`.
#[derive(Clone, Debug, Serialize)]
pub struct CnfFormula {
    num_variables: u32,
    clauses: Vec<Clause>,
    provenance: Provenance,
}

impl CnfFormula {
    pub fn new(
        num_variables: u32,
        clauses: Vec<Clause>,
        provenance: Provenance,
    ) -> Result<Self, FrontendError> {
        for lit in clauses.iter().flat_map(|c| c.literals()) {
            if lit.variable > num_variables {
                return Err(FrontendError::VariableOutOfRange {
                    literal: lit.to_dimacs(),
                    num_variables,
                });
            }
        }
        Ok(CnfFormula { num_variables, clauses, provenance })
    }

    /// Shorthand for tests and generators: clauses as signed DIMACS integers.
    pub fn from_signed(
        num_variables: u32,
        clauses: &[&[i64]],
        provenance: Provenance,
    ) -> Result<Self, FrontendError> {
        let clauses = clauses
            .iter()
            .map(|c| {
                Clause::new(c.iter().map(|&v| {
                    Literal::from_dimacs(v).expect("zero is not a literal")
                }))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(num_variables, clauses, provenance)
    }

    pub fn num_variables(&self) -> u32 {
        self.num_variables
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Direct evaluation. Only meaningful for formulas of at most 64
    /// variables.
    pub fn satisfies(&self, bits: Assignment) -> bool {
        debug_assert!(self.num_variables <= 64);
        self.clauses.iter().all(|c| c.eval(bits))
    }

    /// Clauses as `(positive mask, negative mask)` pairs for fast bulk
    /// evaluation.
    pub fn clause_masks(&self) -> Vec<(u64, u64)> {
        self.clauses
            .iter()
            .map(|c| {
                c.literals().iter().fold((0u64, 0u64), |(p, n), l| {
                    let bit = 1u64 << (l.variable - 1);
                    if l.negated {
                        (p, n | bit)
                    } else {
                        (p | bit, n)
                    }
                })
            })
            .collect()
    }

    /// Equality up to literal order inside clauses; provenance is ignored.
    pub fn same_clauses(&self, other: &CnfFormula) -> bool {
        self.num_variables == other.num_variables
            && self.clauses.len() == other.clauses.len()
            && self
                .clauses
                .iter()
                .zip(&other.clauses)
                .all(|(a, b)| a.sorted() == b.sorted())
    }
}

/// Evaluate pre-compiled clause masks.
#[inline]
pub fn masks_satisfied(masks: &[(u64, u64)], bits: Assignment) -> bool {
    masks.iter().all(|&(p, n)| bits & p != 0 || !bits & n != 0)
}
