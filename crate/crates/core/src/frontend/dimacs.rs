use std::fmt::Write as _;

use super::{Clause, CnfFormula, FrontendError, Literal, Provenance};

fn parse_err(line: usize, message: impl Into<String>) -> FrontendError {
    FrontendError::Parse { line, message: message.into() }
}

/// Parse DIMACS CNF. Comment lines start with `c`; a `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, FrontendError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(lineno, "duplicate header"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", vars, count] => vars.parse::<u32>().ok().zip(count.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| parse_err(lineno, "malformed header"))?);
            continue;
        }
        let Some((num_variables, _)) = header else {
            return Err(parse_err(lineno, "clause before `p cnf` header"));
        };
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| parse_err(lineno, format!("invalid literal `{token}`")))?;
            match Literal::from_dimacs(value) {
                None if value == 0 => {
                    clauses.push(Clause::new(current.drain(..))?);
                }
                None => {
                    return Err(FrontendError::VariableOutOfRange { literal: value, num_variables })
                }
                Some(lit) if lit.variable > num_variables => {
                    return Err(FrontendError::VariableOutOfRange { literal: value, num_variables })
                }
                Some(lit) => current.push(lit),
            }
        }
    }

    let (num_variables, declared) = header.ok_or_else(|| parse_err(last_line, "missing `p cnf` header"))?;
    if !current.is_empty() {
        return Err(parse_err(last_line, "unterminated clause"));
    }
    if clauses.len() != declared {
        return Err(FrontendError::ClauseCountMismatch { declared, found: clauses.len() });
    }
    CnfFormula::new(num_variables, clauses, Provenance::DimacsFile)
}

pub fn emit_dimacs(formula: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_variables(), formula.clauses().len());
    for clause in formula.clauses() {
        for lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_formulas() {
        let f = parse_dimacs("p cnf 2 1\n1 2 0").unwrap();
        assert_eq!(f.num_variables(), 2);
        assert_eq!(f.clauses().len(), 1);
        assert_eq!(f.clauses()[0].literals(), &[Literal::pos(1), Literal::pos(2)]);

        let f = parse_dimacs("p cnf 1 1\n-1 0").unwrap();
        assert_eq!(f.clauses()[0].literals(), &[Literal::neg(1)]);
    }

    #[test]
    fn comments_and_multiline_clauses() {
        let f = parse_dimacs("c hello\np cnf 3 2\n1 -2\n 3 0 c\n-1 0\n%\n0\n").unwrap_err();
        // `c` is not an integer token inside a clause line
        assert!(matches!(f, FrontendError::Parse { line: 4, .. }));
        let f = parse_dimacs("c hello\np cnf 3 2\n1 -2\n 3 0\nc mid\n-1 0\n%\n0\n").unwrap();
        assert_eq!(f.clauses()[0].width(), 3);
        assert_eq!(f.clauses()[1].literals(), &[Literal::neg(1)]);
    }

    #[test]
    fn deduplicates_repeated_literals() {
        let f = parse_dimacs("p cnf 2 1\n1 1 2 0\n").unwrap();
        assert_eq!(f.clauses()[0].width(), 2);
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 -1 0"),
            Err(FrontendError::TautologicalClause(1))
        ));
        assert!(matches!(parse_dimacs("p cnf x 1\n1 0"), Err(FrontendError::Parse { .. })));
        assert!(matches!(parse_dimacs("p sat 2 1\n1 0"), Err(FrontendError::Parse { .. })));
        assert!(matches!(parse_dimacs("1 0\n"), Err(FrontendError::Parse { .. })));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 3 0"),
            Err(FrontendError::VariableOutOfRange { literal: 3, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 2\n1 2 0"),
            Err(FrontendError::ClauseCountMismatch { declared: 2, found: 1 })
        ));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2"), Err(FrontendError::Parse { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n0"), Err(FrontendError::EmptyClause)));
    }

    #[test]
    fn emits_canonical_text() {
        let f = parse_dimacs("p cnf 2 1\n1 2 0").unwrap();
        assert_eq!(emit_dimacs(&f), "p cnf 2 1\n1 2 0\n");
        let empty = CnfFormula::new(3, vec![], Provenance::DimacsFile).unwrap();
        assert_eq!(emit_dimacs(&empty), "p cnf 3 0\n");
    }
}
