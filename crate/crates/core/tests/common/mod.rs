#![allow(dead_code)]

use qverify_core::frontend::{CnfFormula, Provenance};
use qverify_core::rng::{stream, RunSeed};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Signed clauses over `1..=n` with distinct variables per clause.
pub fn random_clauses(rng: &mut ChaCha8Rng, max_vars: u32, max_clauses: usize, max_width: usize) -> (u32, Vec<Vec<i64>>) {
    let n = rng.random_range(1..=max_vars);
    let m = rng.random_range(1..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            let width = rng.random_range(1..=max_width.min(n as usize));
            let mut vars: Vec<i64> = (1..=n as i64).collect();
            for i in 0..width {
                let j = rng.random_range(i..vars.len());
                vars.swap(i, j);
            }
            vars[..width].iter().map(|&v| if rng.random::<bool>() { -v } else { v }).collect()
        })
        .collect();
    (n, clauses)
}

pub fn formula(n: u32, clauses: &[Vec<i64>]) -> CnfFormula {
    let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
    CnfFormula::from_signed(n, &refs, Provenance::DimacsFile).unwrap()
}

/// Direct truth-table evaluation of signed clauses.
pub fn satisfied_by(clauses: &[Vec<i64>], bits: u64) -> bool {
    clauses.iter().all(|c| {
        c.iter().any(|&l| {
            let value = bits >> (l.unsigned_abs() - 1) & 1 == 1;
            value == (l > 0)
        })
    })
}

pub fn satisfying_set(n: u32, clauses: &[Vec<i64>]) -> Vec<u64> {
    (0..1u64 << n).filter(|&b| satisfied_by(clauses, b)).collect()
}

pub fn fuzz_rng(salt: u64) -> ChaCha8Rng {
    RunSeed(salt).rng(stream::FUZZ)
}
