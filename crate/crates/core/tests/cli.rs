//! End-to-end runs of the `rumin` binary.

use std::fs;
use std::process::Command;

fn rumin(args: &[&str], dir: &std::path::Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rumin")).args(args).current_dir(dir).output().unwrap()
}

#[test]
fn verify_algebra_passes_for_small_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = rumin(&["verify-algebra", "--n", "1", "--samples", "10", "--json", "certs.json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let certs: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("certs.json")).unwrap()).unwrap();
    assert!(certs.as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn sample_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let out = rumin(&["sample", "--degree", "3", "--points", "17", "--seed", "2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = rumin(&["solve", "--input", "omega.json", "--degree", "3", "--report", "report.json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(rep["degree"], 3);
    assert!(rep["residual_l2"].as_f64().unwrap() < 0.2);
    assert!(dir.path().join("phi.json").exists());
}

#[test]
fn wrong_degree_and_bad_config_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert!(rumin(&["sample", "--degree", "2", "--points", "9"], dir.path()).status.success());
    assert_eq!(rumin(&["solve", "--input", "omega.json", "--degree", "3"], dir.path()).status.code(), Some(2));
    fs::write(dir.path().join("bad.cfg"), "trials = 3\nnot_a_key = 1\n").unwrap();
    assert_eq!(rumin(&["poincare-experiment", "--config", "bad.cfg"], dir.path()).status.code(), Some(2));
}

#[test]
fn experiment_writes_its_tables() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "# small run\nh = 3\ntrials = 2\npoints = 9\nmethod = laplacian\n").unwrap();
    let out = rumin(&["poincare-experiment", "--config", "run.cfg", "--out", "res"], dir.path());
    assert!(out.status.code() == Some(0) || out.status.code() == Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["poincare_h3_trials.csv", "poincare_h3_summary.json", "poincare_9.dat", "poincare_17.dat"] {
        assert!(dir.path().join("res").join(f).exists(), "{f} missing");
    }
    let csv = fs::read_to_string(dir.path().join("res/poincare_h3_trials.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2);
}
