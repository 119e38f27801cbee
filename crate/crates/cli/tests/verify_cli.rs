use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qverify_core::frontend::Synthetic;

const BIN: &str = env!("CARGO_BIN_EXE_qverify");

fn testdata(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("testdata").join(name)
}

fn qverify(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("QVERIFY_CHECKER").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// A stand-in checker that prints a fixed DIMACS file.
fn stub_checker(dir: &Path, cnf: &Path) -> PathBuf {
    let path = dir.join("stub-checker");
    std::fs::write(&path, format!("#!/bin/sh\necho 'stub checker 1.0'\ncat '{}'\n", cnf.display())).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

#[test]
fn grover_finds_the_unique_witness() {
    let o = qverify(&["verify", "--synthetic", "unique", "--solver", "grover"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: 101010"));
}

#[test]
fn contradiction_file_has_no_flaw() {
    let path = testdata("unsat.cnf");
    let o = qverify(&["verify", "--dimacs", path.to_str().unwrap(), "--solver", "brute"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn every_synthetic_instance_is_a_flaw_under_brute_force() {
    for inst in Synthetic::catalogue() {
        let o = qverify(&["verify", "--synthetic", &inst.to_string(), "--solver", "brute"]);
        assert_eq!(o.status.code(), Some(1), "{inst}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let path = testdata("or2.cnf");
    let conflicting = qverify(&["verify", "--synthetic", "unique", "--dimacs", path.to_str().unwrap()]);
    assert_eq!(conflicting.status.code(), Some(2));
    assert_eq!(qverify(&["verify"]).status.code(), Some(2));
    let too_big = qverify(&["verify", "--synthetic", "xor:30", "--solver", "qaoa"]);
    assert_eq!(too_big.status.code(), Some(2));
    let bad_check = qverify(&["verify", "--source", testdata("div.c").to_str().unwrap(), "--check", "spelling"]);
    assert_eq!(bad_check.status.code(), Some(2));
}

#[test]
fn stub_checker_drives_the_source_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let checker = stub_checker(dir.path(), &testdata("or2.cnf"));
    let source = testdata("div.c");
    for solver in ["brute", "qaoa", "grover", "qsvt", "vqe"] {
        let o = Command::new(BIN)
            .args(["verify", "--source", source.to_str().unwrap(), "--check", "div-by-zero", "--solver", solver])
            .env("QVERIFY_CHECKER", &checker)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(1), "{solver}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("(model-checker)"));
    }
}

#[test]
fn missing_checker_exits_with_skip_code() {
    let o = Command::new(BIN)
        .args(["verify", "--source", testdata("bounds.c").to_str().unwrap(), "--check", "bounds"])
        .env("QVERIFY_CHECKER", "/nonexistent/checker")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(77));
}

/// Drop the wall-clock field and the per-run trace path.
fn comparable(json: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    let map = v.as_object_mut().unwrap();
    map.remove("duration_ms");
    assert!(map.remove("trace_file").is_some());
    v
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (mut reports, mut traces) = (Vec::new(), Vec::new());
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}.json"));
        let o = qverify(&["verify", "--synthetic", "xor:3", "--solver", "vqe", "--layers", "2", "--out", out.to_str().unwrap()]);
        assert!(o.status.code() == Some(0) || o.status.code() == Some(1));
        reports.push(std::fs::read_to_string(&out).unwrap());
        let trace = std::fs::read_to_string(dir.path().join(format!("run{k}.trace.csv"))).unwrap();
        assert!(trace.starts_with("iteration,value,normalized_value\n"));
        traces.push(trace);
    }
    let (a, b) = (comparable(&reports[0]), comparable(&reports[1]));
    assert_eq!(a, b);
    assert_eq!(traces[0], traces[1]);
    for key in ["instance", "provenance", "n_cnf_vars", "n_qubo_vars", "n_aux", "gap", "solver", "config", "verdict", "seed"] {
        assert!(a.get(key).is_some(), "missing {key}");
    }
    assert_eq!(a["gap"]["M"], 16);
    assert_eq!(a["config"]["optimizer"]["kind"], "trust-region");
}

#[test]
fn solver_configuration_file_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("qsvt.json");
    std::fs::write(&cfg, r#"{"solver": "qsvt", "d": 9, "shots": 500, "seed": 7}"#).unwrap();
    let out = dir.path().join("r.json");
    let o = qverify(&["verify", "--synthetic", "or:3", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["config"]["d"], 9);
    assert_eq!(v["seed"], 7);
    assert!(v["rate"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut contents = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("s{k}"));
        let o = qverify(&[
            "sweep",
            "--instances",
            "xor:2,or:3",
            "--solvers",
            "qaoa,vqe,grover,qsvt",
            "--seeds",
            "2",
            "--max-iterations",
            "30",
            "--heatmap-degrees",
            "1..5",
            "--heatmap-gaps",
            "2..4",
            "--out-dir",
            out.to_str().unwrap(),
            "--jobs",
            if k == 0 { "1" } else { "4" },
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let files: Vec<String> = ["convergence.csv", "rates.csv", "heatmap.csv", "runs.csv"]
            .iter()
            .map(|f| std::fs::read_to_string(out.join(f)).unwrap())
            .collect();
        contents.push(files);
    }
    assert_eq!(contents[0], contents[1]);
    assert_eq!(contents[0][1].lines().count(), 3);
    assert_eq!(contents[0][2].lines().count(), 1 + 5 * 3);
}

#[test]
fn malformed_grid_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = qverify(&["sweep", "--no-grid", "--heatmap-degrees", "9..3", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = qverify(&["sweep", "--instances", "bogus", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
