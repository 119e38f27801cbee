use std::collections::BTreeMap;

use super::ReductionError;
use crate::frontend::Literal;
use crate::Assignment;

/// A literal over QUBO indices (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuboLiteral {
    pub index: usize,
    pub negated: bool,
}

impl QuboLiteral {
    pub fn pos(index: usize) -> Self {
        QuboLiteral { index, negated: false }
    }
}

impl From<Literal> for QuboLiteral {
    fn from(l: Literal) -> Self {
        QuboLiteral { index: l.variable as usize - 1, negated: l.negated }
    }
}

/// `constant + coeff·x` with at most one variable.
#[derive(Clone, Copy, Debug)]
struct Affine {
    constant: i64,
    term: Option<(usize, i64)>,
}

impl Affine {
    /// Value of the literal: `x`, or `1 - x` when negated.
    fn truth(lit: QuboLiteral) -> Self {
        if lit.negated {
            Affine { constant: 1, term: Some((lit.index, -1)) }
        } else {
            Affine { constant: 0, term: Some((lit.index, 1)) }
        }
    }

    /// `1 - literal`, the penalty of a single-literal clause.
    fn falsity(lit: QuboLiteral) -> Self {
        Self::truth(QuboLiteral { negated: !lit.negated, ..lit })
    }

    fn scale(self, k: i64) -> Self {
        Affine { constant: self.constant * k, term: self.term.map(|(i, c)| (i, c * k)) }
    }
}

/// Quadratic pseudo-Boolean polynomial with integer coefficients. Squares
/// collapse onto the linear term since `x² = x` on binary values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuadPoly {
    pub constant: i64,
    pub linear: BTreeMap<usize, i64>,
    pub quadratic: BTreeMap<(usize, usize), i64>,
}

impl QuadPoly {
    fn add_constant(&mut self, c: i64) -> Result<(), ReductionError> {
        self.constant = self.constant.checked_add(c).ok_or(ReductionError::Overflow)?;
        Ok(())
    }

    fn add_linear(&mut self, i: usize, c: i64) -> Result<(), ReductionError> {
        let e = self.linear.entry(i).or_insert(0);
        *e = e.checked_add(c).ok_or(ReductionError::Overflow)?;
        Ok(())
    }

    fn add_quadratic(&mut self, i: usize, j: usize, c: i64) -> Result<(), ReductionError> {
        if i == j {
            return self.add_linear(i, c);
        }
        let e = self.quadratic.entry((i.min(j), i.max(j))).or_insert(0);
        *e = e.checked_add(c).ok_or(ReductionError::Overflow)?;
        Ok(())
    }

    fn add_affine(&mut self, a: Affine) -> Result<(), ReductionError> {
        self.add_constant(a.constant)?;
        if let Some((i, c)) = a.term {
            self.add_linear(i, c)?;
        }
        Ok(())
    }

    fn add_product(&mut self, a: Affine, b: Affine) -> Result<(), ReductionError> {
        let mul = |x: i64, y: i64| x.checked_mul(y).ok_or(ReductionError::Overflow);
        self.add_constant(mul(a.constant, b.constant)?)?;
        if let Some((i, c)) = b.term {
            self.add_linear(i, mul(a.constant, c)?)?;
        }
        if let Some((i, c)) = a.term {
            self.add_linear(i, mul(b.constant, c)?)?;
            if let Some((j, d)) = b.term {
                self.add_quadratic(i, j, mul(c, d)?)?;
            }
        }
        Ok(())
    }

    pub fn add(&mut self, other: &QuadPoly) -> Result<(), ReductionError> {
        self.add_constant(other.constant)?;
        for (&i, &c) in &other.linear {
            self.add_linear(i, c)?;
        }
        for (&(i, j), &c) in &other.quadratic {
            self.add_quadratic(i, j, c)?;
        }
        Ok(())
    }

    pub fn eval(&self, bits: Assignment) -> i64 {
        let x = |i: usize| (bits >> i & 1) as i64;
        self.constant
            + self.linear.iter().map(|(&i, &c)| c * x(i)).sum::<i64>()
            + self.quadratic.iter().map(|(&(i, j), &c)| c * x(i) * x(j)).sum::<i64>()
    }
}

/// Penalty of a clause with one or two literals: the product of the
/// literals' falsities, `0` when satisfied and `1` otherwise.
pub fn clause_penalty(literals: &[QuboLiteral]) -> Result<QuadPoly, ReductionError> {
    let mut p = QuadPoly::default();
    match *literals {
        [a] => p.add_affine(Affine::falsity(a))?,
        [a, b] => p.add_product(Affine::falsity(a), Affine::falsity(b))?,
        _ => return Err(ReductionError::ClauseTooWide(literals.len())),
    }
    Ok(p)
}

/// `(1 - 2a - 2b)·r + a + b + ab` with `a`, `b` substituted by the literals'
/// truth values. Zero exactly when `r = a ∨ b`, at least one otherwise, at
/// most three.
pub fn reduction_gadget(a: QuboLiteral, b: QuboLiteral, r: usize) -> Result<QuadPoly, ReductionError> {
    let (ta, tb) = (Affine::truth(a), Affine::truth(b));
    let r_aff = Affine { constant: 0, term: Some((r, 1)) };
    let mut p = QuadPoly::default();
    p.add_affine(r_aff)?;
    p.add_product(ta.scale(-2), r_aff)?;
    p.add_product(tb.scale(-2), r_aff)?;
    p.add_affine(ta)?;
    p.add_affine(tb)?;
    p.add_product(ta, tb)?;
    Ok(p)
}
