use serde::{Deserialize, Serialize};

use super::poly::{clause_penalty, reduction_gadget, QuadPoly, QuboLiteral};
use super::ReductionError;
use crate::frontend::CnfFormula;
use crate::Assignment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VarOrigin {
    /// CNF variable (1-based).
    Original { variable: u32 },
    /// Introduced while narrowing clause `clause` (0-based); `step` counts
    /// from 1 within that clause.
    Auxiliary { clause: usize, step: usize },
}

/// How many penalty polynomials of each kind were summed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PenaltyTerms {
    /// Width-≤2 clause penalties, each bounded by 1.
    pub clauses: usize,
    /// Narrowing gadgets, each bounded by 3.
    pub gadgets: usize,
}

/// `x^T Q x + c` over binary `x`, with `Q` stored upper-triangular so every
/// coefficient stays an integer: diagonal entries are the linear terms and
/// entry `(i, j)` with `i < j` is the full coefficient of `x_i x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qubo {
    linear: Vec<i64>,
    quadratic: Vec<(usize, usize, i64)>,
    offset: i64,
    variable_map: Vec<VarOrigin>,
    terms: PenaltyTerms,
}

impl Qubo {
    fn from_poly(poly: QuadPoly, variable_map: Vec<VarOrigin>, terms: PenaltyTerms) -> Result<Self, ReductionError> {
        let n = variable_map.len();
        let mut linear = vec![0i64; n];
        for (i, c) in poly.linear {
            linear[i] = c;
        }
        let quadratic: Vec<_> = poly
            .quadratic
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|((i, j), c)| (i, j, c))
            .collect();
        Self::build(linear, quadratic, poly.constant, variable_map, terms)
    }

    fn build(
        linear: Vec<i64>,
        quadratic: Vec<(usize, usize, i64)>,
        offset: i64,
        variable_map: Vec<VarOrigin>,
        terms: PenaltyTerms,
    ) -> Result<Self, ReductionError> {
        // bound every partial sum so objective evaluation cannot overflow
        let magnitude = linear
            .iter()
            .chain(quadratic.iter().map(|(_, _, c)| c))
            .chain(std::iter::once(&offset))
            .try_fold(0i64, |acc, c| acc.checked_add(c.checked_abs()?));
        if magnitude.is_none() {
            return Err(ReductionError::Overflow);
        }
        Ok(Qubo { linear, quadratic, offset, variable_map, terms })
    }

    /// The all-zero objective over `n` original variables.
    pub fn zero(n: usize) -> Self {
        Qubo {
            linear: vec![0; n],
            quadratic: vec![],
            offset: 0,
            variable_map: (1..=n as u32).map(|variable| VarOrigin::Original { variable }).collect(),
            terms: PenaltyTerms::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.linear.len()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn linear(&self) -> &[i64] {
        &self.linear
    }

    /// Off-diagonal terms `(i, j, coeff)` with `i < j`.
    pub fn quadratic(&self) -> &[(usize, usize, i64)] {
        &self.quadratic
    }

    pub fn variable_map(&self) -> &[VarOrigin] {
        &self.variable_map
    }

    pub fn penalty_terms(&self) -> PenaltyTerms {
        self.terms
    }

    pub fn num_original(&self) -> usize {
        self.variable_map
            .iter()
            .filter(|v| matches!(v, VarOrigin::Original { .. }))
            .count()
    }

    pub fn num_auxiliary(&self) -> usize {
        self.n() - self.num_original()
    }

    /// Upper-triangular entry; `(j, i)` for `i < j` is zero.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.linear[i]
        } else {
            self.quadratic
                .iter()
                .find(|&&(a, b, _)| (a, b) == (i, j))
                .map_or(0, |t| t.2)
        }
    }

    /// Half-split symmetric entry `(Q_ij + Q_ji) / 2`.
    pub fn symmetric_entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.linear[i] as f64
        } else {
            (self.entry(i.min(j), i.max(j))) as f64 / 2.0
        }
    }

    #[inline]
    pub fn objective(&self, bits: Assignment) -> i64 {
        let mut v = self.offset;
        for (i, &c) in self.linear.iter().enumerate() {
            if bits >> i & 1 == 1 {
                v += c;
            }
        }
        for &(i, j, c) in &self.quadratic {
            if bits >> i & bits >> j & 1 == 1 {
                v += c;
            }
        }
        v
    }

    /// Mask selecting the original-variable bits of a QUBO assignment.
    /// Originals always occupy the low indices.
    pub fn original_mask(&self) -> Assignment {
        let k = self.num_original();
        if k >= 64 {
            u64::MAX
        } else {
            (1u64 << k) - 1
        }
    }

    pub fn to_json(&self) -> QuboJson {
        let mut entries: Vec<(usize, usize, i64)> = self
            .linear
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, i, c))
            .chain(self.quadratic.iter().copied())
            .collect();
        entries.sort_unstable();
        QuboJson {
            n: self.n(),
            entries,
            offset: self.offset,
            variable_map: self.variable_map.clone(),
            penalty_terms: self.terms,
        }
    }

    pub fn from_json(json: QuboJson) -> Result<Self, ReductionError> {
        if json.variable_map.len() != json.n {
            return Err(ReductionError::Invalid("variable_map length differs from n".into()));
        }
        let mut linear = vec![0i64; json.n];
        let mut quadratic = std::collections::BTreeMap::new();
        for (i, j, c) in json.entries {
            if i > j || j >= json.n {
                return Err(ReductionError::Invalid(format!("entry ({i}, {j}) is not upper-triangular within n")));
            }
            let slot = if i == j { &mut linear[i] } else { quadratic.entry((i, j)).or_insert(0) };
            *slot = slot.checked_add(c).ok_or(ReductionError::Overflow)?;
        }
        let quadratic = quadratic.into_iter().filter(|&(_, c)| c != 0).map(|((i, j), c)| (i, j, c)).collect();
        Self::build(linear, quadratic, json.offset, json.variable_map, json.penalty_terms)
    }
}

/// Interchange form: `{n, entries: [[i, j, coeff]...], offset, variable_map}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuboJson {
    pub n: usize,
    pub entries: Vec<(usize, usize, i64)>,
    pub offset: i64,
    pub variable_map: Vec<VarOrigin>,
    #[serde(default)]
    pub penalty_terms: PenaltyTerms,
}

/// Sum of clause penalties. Clauses wider than two literals are narrowed
/// left to right: `r1 = L1 ∨ L2`, `r2 = r1 ∨ L3`, … until two literals
/// remain, each step adding one auxiliary variable and one gadget.
pub fn cnf_to_qubo(formula: &CnfFormula) -> Result<Qubo, ReductionError> {
    let mut variable_map: Vec<VarOrigin> =
        (1..=formula.num_variables()).map(|variable| VarOrigin::Original { variable }).collect();
    let mut poly = QuadPoly::default();
    let mut terms = PenaltyTerms::default();

    for (clause_id, clause) in formula.clauses().iter().enumerate() {
        let lits: Vec<QuboLiteral> = clause.literals().iter().map(|&l| l.into()).collect();
        let mut current = lits[0];
        let mut rest = &lits[1..];
        let mut step = 0;
        while rest.len() > 1 {
            step += 1;
            let r = variable_map.len();
            variable_map.push(VarOrigin::Auxiliary { clause: clause_id, step });
            poly.add(&reduction_gadget(current, rest[0], r)?)?;
            terms.gadgets += 1;
            current = QuboLiteral::pos(r);
            rest = &rest[1..];
        }
        let narrowed: Vec<QuboLiteral> = std::iter::once(current).chain(rest.iter().copied()).collect();
        poly.add(&clause_penalty(&narrowed)?)?;
        terms.clauses += 1;
    }
    Qubo::from_poly(poly, variable_map, terms)
}
