//! Synthetic instances modelled on small arithmetic, logical and program-flow
//! conditions. Value variables always come first (`x1..`), auxiliary CNF
//! variables after them.

use std::fmt;
use std::str::FromStr;

use super::{Clause, CnfFormula, FrontendError, Literal, Provenance};

/// Largest number of value bits a predicate-encoded instance may use.
pub const MAX_PREDICATE_BITS: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Synthetic {
    /// `a + b = 2c + d`, each operand `width` bits.
    Addition { width: u32 },
    /// `(a = b = c) ∧ (d + e + f > 1)`.
    ProgramFlow { width: u32 },
    /// `2a + b > 2c + d`.
    Indicator { width: u32 },
    /// All `n` bits set.
    Or { n: u32 },
    /// Odd parity over `n` bits.
    Xor { n: u32 },
    Unique,
    SemiUnique,
    TwoSolutions,
    TwoSolutionsOverlap,
    ThreeSolutions,
}

impl Synthetic {
    /// Every instance at its default parameters.
    pub fn catalogue() -> Vec<Synthetic> {
        vec![
            Synthetic::Addition { width: 1 },
            Synthetic::ProgramFlow { width: 1 },
            Synthetic::Indicator { width: 1 },
            Synthetic::Or { n: 3 },
            Synthetic::Xor { n: 2 },
            Synthetic::Xor { n: 3 },
            Synthetic::Unique,
            Synthetic::SemiUnique,
            Synthetic::TwoSolutions,
            Synthetic::TwoSolutionsOverlap,
            Synthetic::ThreeSolutions,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Synthetic::Addition { .. } => "addition",
            Synthetic::ProgramFlow { .. } => "program-flow",
            Synthetic::Indicator { .. } => "indicator",
            Synthetic::Or { .. } => "or",
            Synthetic::Xor { .. } => "xor",
            Synthetic::Unique => "unique",
            Synthetic::SemiUnique => "semi-unique",
            Synthetic::TwoSolutions => "two-solutions",
            Synthetic::TwoSolutionsOverlap => "two-solutions-overlap",
            Synthetic::ThreeSolutions => "three-solutions",
        }
    }

    /// Number of leading CNF variables that carry the instance's value.
    pub fn value_bits(&self) -> u32 {
        match *self {
            Synthetic::Addition { width } | Synthetic::Indicator { width } => 4 * width,
            Synthetic::ProgramFlow { width } => 6 * width,
            Synthetic::Or { n } | Synthetic::Xor { n } => n,
            Synthetic::Unique => 6,
            Synthetic::SemiUnique | Synthetic::TwoSolutionsOverlap | Synthetic::ThreeSolutions => 8,
            Synthetic::TwoSolutions => 14,
        }
    }

    fn allowed_values(&self) -> Option<&'static [u64]> {
        match self {
            Synthetic::Unique => Some(&[42]),
            Synthetic::SemiUnique => Some(&[42, 69]),
            Synthetic::TwoSolutions => Some(&[15, 240]),
            Synthetic::TwoSolutionsOverlap => Some(&[85, 204]),
            Synthetic::ThreeSolutions => Some(&[42, 101, 205]),
            _ => None,
        }
    }

    fn validate(&self) -> Result<(), FrontendError> {
        let bad = |message: &str| FrontendError::InvalidParams {
            name: self.name().into(),
            message: message.into(),
        };
        match *self {
            Synthetic::Or { n } | Synthetic::Xor { n } if n == 0 || n > 63 => {
                Err(bad("n must be between 1 and 63"))
            }
            Synthetic::Addition { width }
            | Synthetic::Indicator { width }
            | Synthetic::ProgramFlow { width }
                if width == 0 || self.value_bits() > MAX_PREDICATE_BITS =>
            {
                Err(bad("operand width must be at least 1 and keep the value within 12 bits"))
            }
            _ => Ok(()),
        }
    }

    pub fn generate(&self) -> Result<CnfFormula, FrontendError> {
        self.validate()?;
        let provenance = Provenance::Synthetic(self.to_string());
        let (num_variables, clauses) = match *self {
            Synthetic::Or { n } => (n, (1..=n).map(|v| unit(Literal::pos(v))).collect()),
            Synthetic::Xor { n } => xor_clauses(n),
            Synthetic::Addition { width } => predicate_clauses(4 * width, |m| {
                let f = fields(m, width, 4);
                f[0] + f[1] == 2 * f[2] + f[3]
            }),
            Synthetic::Indicator { width } => predicate_clauses(4 * width, |m| {
                let f = fields(m, width, 4);
                2 * f[0] + f[1] > 2 * f[2] + f[3]
            }),
            Synthetic::ProgramFlow { width } => predicate_clauses(6 * width, |m| {
                let f = fields(m, width, 6);
                f[0] == f[1] && f[1] == f[2] && f[3] + f[4] + f[5] > 1
            }),
            _ => value_set_clauses(self.value_bits(), self.allowed_values().unwrap()),
        };
        CnfFormula::new(num_variables, clauses, provenance)
    }
}

impl fmt::Display for Synthetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Synthetic::Addition { width } | Synthetic::Indicator { width } | Synthetic::ProgramFlow { width } => {
                write!(f, "{}:{width}", self.name())
            }
            Synthetic::Or { n } | Synthetic::Xor { n } => write!(f, "{}:{n}", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for Synthetic {
    type Err = FrontendError;

    /// `name` or `name:param`, e.g. `xor:3`, `addition:1`, `unique`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let number = |default: u32| -> Result<u32, FrontendError> {
            param.map_or(Ok(default), |p| {
                p.parse().map_err(|_| FrontendError::InvalidParams {
                    name: name.into(),
                    message: format!("`{p}` is not a positive integer"),
                })
            })
        };
        let fixed = |inst: Synthetic| -> Result<Synthetic, FrontendError> {
            match param {
                None => Ok(inst),
                Some(_) => Err(FrontendError::InvalidParams {
                    name: name.into(),
                    message: "instance takes no parameters".into(),
                }),
            }
        };
        let inst = match name {
            "addition" | "add" => Synthetic::Addition { width: number(1)? },
            "program-flow" | "flow" => Synthetic::ProgramFlow { width: number(1)? },
            "indicator" => Synthetic::Indicator { width: number(1)? },
            "or" => Synthetic::Or { n: number(3)? },
            "xor" => Synthetic::Xor { n: number(2)? },
            "unique" => fixed(Synthetic::Unique)?,
            "semi-unique" => fixed(Synthetic::SemiUnique)?,
            "two-solutions" => fixed(Synthetic::TwoSolutions)?,
            "two-solutions-overlap" => fixed(Synthetic::TwoSolutionsOverlap)?,
            "three-solutions" => fixed(Synthetic::ThreeSolutions)?,
            _ => return Err(FrontendError::UnknownInstance(name.into())),
        };
        inst.validate()?;
        Ok(inst)
    }
}

/// Parse `name[:params]` and generate the formula.
pub fn generate_synthetic(spec: &str) -> Result<CnfFormula, FrontendError> {
    spec.parse::<Synthetic>()?.generate()
}

fn unit(lit: Literal) -> Clause {
    Clause::new([lit]).expect("single literal")
}

fn clause(lits: impl IntoIterator<Item = Literal>) -> Clause {
    Clause::new(lits).expect("generator clauses use distinct variables")
}

/// Split the low `count * width` bits of `m` into `count` unsigned fields.
fn fields(m: u64, width: u32, count: u32) -> Vec<u64> {
    let mask = (1u64 << width) - 1;
    (0..count).map(|k| m >> (k * width) & mask).collect()
}

/// Literal that is false exactly when variable `var` has value `bit`.
fn blocking(var: u32, bit: bool) -> Literal {
    if bit {
        Literal::neg(var)
    } else {
        Literal::pos(var)
    }
}

fn xor_definition(z: u32, p: u32, q: u32) -> [Clause; 4] {
    let (zp, zn) = (Literal::pos(z), Literal::neg(z));
    let (pp, pn) = (Literal::pos(p), Literal::neg(p));
    let (qp, qn) = (Literal::pos(q), Literal::neg(q));
    [
        clause([zn, pp, qp]),
        clause([zn, pn, qn]),
        clause([zp, pn, qp]),
        clause([zp, pp, qn]),
    ]
}

/// Direct expansion (one blocking clause per even-parity assignment) up to
/// four bits, a chain of auxiliary partial parities beyond.
fn xor_clauses(n: u32) -> (u32, Vec<Clause>) {
    if n <= 4 {
        let clauses = (0u64..1 << n)
            .filter(|m| m.count_ones() % 2 == 0)
            .map(|m| clause((0..n).map(|j| blocking(j + 1, m >> j & 1 == 1))))
            .collect();
        return (n, clauses);
    }
    // y_1 = x1 ⊕ x2, y_k = y_{k-1} ⊕ x_{k+1}, and finally y_{n-2} ⊕ x_n = 1.
    let aux = |k: u32| n + k;
    let mut clauses = Vec::new();
    clauses.extend(xor_definition(aux(1), 1, 2));
    for k in 2..=n - 2 {
        clauses.extend(xor_definition(aux(k), aux(k - 1), k + 1));
    }
    let last = aux(n - 2);
    clauses.push(clause([Literal::pos(last), Literal::pos(n)]));
    clauses.push(clause([Literal::neg(last), Literal::neg(n)]));
    (n + n - 2, clauses)
}

/// `bits == v` for exactly one `v` in `values`. A single value is a set of
/// unit clauses; several values get one selector variable each.
fn value_set_clauses(bits: u32, values: &[u64]) -> (u32, Vec<Clause>) {
    let assign = |v: u64| (0..bits).map(move |j| (j + 1, v >> j & 1 == 1));
    if let [v] = values {
        let clauses = assign(*v)
            .map(|(var, bit)| unit(if bit { Literal::pos(var) } else { Literal::neg(var) }))
            .collect();
        return (bits, clauses);
    }
    let selector = |k: usize| bits + 1 + k as u32;
    let mut clauses = vec![clause((0..values.len()).map(|k| Literal::pos(selector(k))))];
    for (k, &v) in values.iter().enumerate() {
        for (var, bit) in assign(v) {
            let value_lit = if bit { Literal::pos(var) } else { Literal::neg(var) };
            clauses.push(clause([Literal::neg(selector(k)), value_lit]));
        }
    }
    (bits + values.len() as u32, clauses)
}

/// CNF of an arbitrary predicate over `bits` variables without auxiliaries:
/// a greedy cover of the falsifying assignments by prime implicants, each
/// implicant becoming one blocking clause.
fn predicate_clauses(bits: u32, predicate: impl Fn(u64) -> bool) -> (u32, Vec<Clause>) {
    let off: Vec<u64> = (0..1u64 << bits).filter(|&m| !predicate(m)).collect();
    let cover = implicant_cover(bits, &off);
    let clauses = cover
        .into_iter()
        .map(|imp| {
            clause(
                (0..bits)
                    .filter(|j| imp.dont_care >> j & 1 == 0)
                    .map(|j| blocking(j + 1, imp.value >> j & 1 == 1)),
            )
        })
        .collect();
    (bits, clauses)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Implicant {
    value: u64,
    dont_care: u64,
}

impl Implicant {
    fn covers(self, m: u64) -> bool {
        m & !self.dont_care == self.value
    }
}

/// Quine–McCluskey prime implicants followed by a deterministic greedy cover.
fn implicant_cover(bits: u32, minterms: &[u64]) -> Vec<Implicant> {
    use std::collections::BTreeSet;

    let mut current: BTreeSet<Implicant> =
        minterms.iter().map(|&m| Implicant { value: m, dont_care: 0 }).collect();
    let mut primes: BTreeSet<Implicant> = BTreeSet::new();
    while !current.is_empty() {
        let mut merged = BTreeSet::new();
        let mut used = BTreeSet::new();
        for &imp in &current {
            for j in 0..bits {
                let bit = 1u64 << j;
                if imp.dont_care & bit != 0 || imp.value & bit != 0 {
                    continue;
                }
                let partner = Implicant { value: imp.value | bit, dont_care: imp.dont_care };
                if current.contains(&partner) {
                    merged.insert(Implicant { value: imp.value, dont_care: imp.dont_care | bit });
                    used.insert(imp);
                    used.insert(partner);
                }
            }
        }
        primes.extend(current.difference(&used).copied());
        current = merged;
    }

    let primes: Vec<Implicant> = primes.into_iter().collect();
    let mut remaining: BTreeSet<u64> = minterms.iter().copied().collect();
    let mut chosen = Vec::new();
    while !remaining.is_empty() {
        let best = primes
            .iter()
            .copied()
            .max_by_key(|p| {
                let gain = remaining.iter().filter(|&&m| p.covers(m)).count();
                // ties: wider implicant (shorter clause), then smallest key
                (gain, p.dont_care.count_ones(), std::cmp::Reverse(*p))
            })
            .expect("every minterm is covered by some prime");
        remaining.retain(|&m| !best.covers(m));
        chosen.push(best);
    }
    chosen
}
