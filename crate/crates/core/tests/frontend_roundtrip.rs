mod common;

use proptest::prelude::*;
use qverify_core::frontend::{emit_dimacs, generate_synthetic, parse_dimacs, Synthetic};

fn clause_strategy(n: u32) -> impl Strategy<Value = Vec<i64>> {
    proptest::sample::subsequence((1..=n as i64).collect::<Vec<_>>(), 1..=n.min(5) as usize)
        .prop_flat_map(|vars| {
            let len = vars.len();
            (Just(vars), proptest::collection::vec(any::<bool>(), len))
        })
        .prop_map(|(vars, signs)| vars.into_iter().zip(signs).map(|(v, s)| if s { -v } else { v }).collect())
}

fn formula_strategy() -> impl Strategy<Value = (u32, Vec<Vec<i64>>)> {
    (1u32..12).prop_flat_map(|n| (Just(n), proptest::collection::vec(clause_strategy(n), 0..20)))
}

proptest! {
    #[test]
    fn emit_then_parse_is_identity((n, clauses) in formula_strategy()) {
        let f = common::formula(n, &clauses);
        let text = emit_dimacs(&f);
        let back = parse_dimacs(&text).unwrap();
        prop_assert_eq!(back.num_variables(), n);
        prop_assert!(back.same_clauses(&f));
        prop_assert_eq!(emit_dimacs(&back), text);
    }

    #[test]
    fn parse_tolerates_layout((n, clauses) in formula_strategy(), split in any::<bool>()) {
        let mut text = format!("c generated\np cnf {n} {}\n", clauses.len());
        for c in &clauses {
            let body: Vec<String> = c.iter().map(i64::to_string).collect();
            if split {
                text.push_str(&body.join("\n"));
                text.push_str("\n0\n");
            } else {
                text.push_str(&format!("  {}   0\n", body.join("  ")));
            }
        }
        prop_assert!(parse_dimacs(&text).unwrap().same_clauses(&common::formula(n, &clauses)));
    }
}

fn value_set(spec: &str, bits: u32, predicate: impl Fn(u64) -> bool) {
    let f = generate_synthetic(spec).unwrap();
    let mut projected: Vec<u64> = (0..1u64 << f.num_variables())
        .filter(|&b| f.satisfies(b))
        .map(|b| b & ((1 << bits) - 1))
        .collect();
    projected.sort_unstable();
    let before = projected.len();
    projected.dedup();
    assert_eq!(before, projected.len(), "{spec}: auxiliaries must be functionally determined");
    let expected: Vec<u64> = (0..1u64 << bits).filter(|&m| predicate(m)).collect();
    assert_eq!(projected, expected, "{spec}");
}

#[test]
fn generators_encode_their_predicates() {
    let bit = |m: u64, i: u32| m >> i & 1;
    value_set("addition", 4, |m| bit(m, 0) + bit(m, 1) == 2 * bit(m, 2) + bit(m, 3));
    value_set("indicator", 4, |m| 2 * bit(m, 0) + bit(m, 1) > 2 * bit(m, 2) + bit(m, 3));
    value_set("program-flow", 6, |m| {
        bit(m, 0) == bit(m, 1) && bit(m, 1) == bit(m, 2) && bit(m, 3) + bit(m, 4) + bit(m, 5) > 1
    });
    value_set("addition:2", 8, |m| (m & 3) + (m >> 2 & 3) == 2 * (m >> 4 & 3) + (m >> 6 & 3));
    value_set("or:3", 3, |m| m == 7);
    value_set("or:5", 5, |m| m == 31);
    for n in [1, 2, 3, 4, 5, 7] {
        value_set(&format!("xor:{n}"), n, |m| m.count_ones() % 2 == 1);
    }
    value_set("unique", 6, |m| m == 42);
    value_set("semi-unique", 8, |m| m == 42 || m == 69);
    value_set("two-solutions", 14, |m| m == 15 || m == 240);
    value_set("two-solutions-overlap", 8, |m| m == 85 || m == 204);
    value_set("three-solutions", 8, |m| [42, 101, 205].contains(&m));
}

#[test]
fn catalogue_names_parse_back() {
    for inst in Synthetic::catalogue() {
        let parsed: Synthetic = inst.to_string().parse().unwrap();
        assert_eq!(parsed, inst);
    }
    assert!(generate_synthetic("nonsense").is_err());
    assert!(generate_synthetic("unique:3").is_err());
    assert!(generate_synthetic("addition:4").is_err());
}
