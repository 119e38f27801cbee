mod common;

use qverify_core::oracle::enumerate_sat;
use qverify_core::rng::RunSeed;
use qverify_core::solvers::{solve, OptimizerKind, OptimizerSpec, Problem, SolverConfig, SolverError};

fn configs(seed: u64) -> Vec<SolverConfig> {
    let seed = RunSeed(seed);
    vec![
        SolverConfig::Brute { budget: 24 },
        SolverConfig::Grover { shots: 32, seed },
        SolverConfig::Qaoa { layers: 1, optimizer: OptimizerSpec::new(OptimizerKind::Spsa, 10), shots: 64, seed },
        SolverConfig::Vqe { layers: 1, optimizer: OptimizerSpec::new(OptimizerKind::TrustRegion, 10), shots: 64, seed },
        SolverConfig::Qsvt { d: Some(3), shots: 64, seed },
    ]
}

#[test]
fn no_solver_reports_a_false_witness() {
    let mut rng = common::fuzz_rng(5);
    let mut sat_seen = [0usize; 5];
    for round in 0..60u64 {
        let (n, clauses) = common::random_clauses(&mut rng, 6, 8, 3);
        let f = common::formula(n, &clauses);
        let truth = enumerate_sat(&f).unwrap();
        let p = Problem::new(f, 24).unwrap();
        for (k, config) in configs(round).iter().enumerate() {
            let report = match solve(&p, config) {
                Ok(r) => r,
                Err(SolverError::TooLarge { .. }) => continue,
                Err(e) => panic!("{}: {e}", config.name()),
            };
            if let Some(w) = report.verdict.witness() {
                assert!(common::satisfied_by(&clauses, w), "{} reported {w:b}", config.name());
                assert!(truth.contains(&w));
                sat_seen[k] += 1;
            }
        }
    }
    assert!(sat_seen.iter().all(|&c| c > 0), "{sat_seen:?}");
}

#[test]
fn brute_force_matches_oracle() {
    let mut rng = common::fuzz_rng(6);
    for _ in 0..200 {
        let (n, clauses) = common::random_clauses(&mut rng, 10, 15, 5);
        let p = Problem::new(common::formula(n, &clauses), 0).unwrap();
        let r = solve(&p, &SolverConfig::Brute { budget: 24 }).unwrap();
        assert_eq!(r.verdict.is_sat(), !common::satisfying_set(n, &clauses).is_empty());
    }
}
