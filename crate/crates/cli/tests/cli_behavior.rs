//! End-to-end checks of the command-line contract: catalogue listing,
//! config diagnostics, exit codes, skip semantics, and CSV emission.

use std::process::{Command, Output};

fn tau2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tau2"))
        .args(args)
        .output()
        .expect("driver binary should spawn")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn list_flag_prints_catalogue() {
    let out = tau2(&["--list"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("12 suites"), "catalogue footer missing:\n{text}");
    for id in ["yb", "qgroup-relations", "tauT", "cpm-duality", "spectra"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "missing suite {id}:\n{text}");
    }
}

#[test]
fn list_json_matches_schema() {
    let out = tau2(&["list", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["count"], 12);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 12);
    assert!(suites.iter().any(|s| s["id"] == "tauT"));
}

#[test]
fn no_command_is_an_error() {
    let out = tau2(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("nothing to do"));
}

#[test]
fn malformed_config_gives_diagnostics_and_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "suites = [\n").unwrap();
    let out = tau2(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("error:"), "no diagnostic:\n{err}");
    assert!(err.contains("malformed config file"), "unexpected diagnostic:\n{err}");
}

#[test]
fn invalid_tolerance_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.toml");
    std::fs::write(&path, "[tolerances]\ndefault = 0.0\n").unwrap();
    let out = tau2(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("must be positive"));
}

#[test]
fn unknown_suite_is_rejected() {
    let out = tau2(&["run", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("unknown suite"));
}

#[test]
fn empty_suite_list_is_a_noop() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "suites = []\n").unwrap();
    let json = dir.path().join("report.json");
    let out = tau2(&[
        "run",
        "--config", cfg.to_str().unwrap(),
        "--out-json", json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("no suites selected"));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["summary"]["total"], 0);
}

#[test]
fn oversized_chain_skips_with_warning() {
    // 4^7 = 16384 site-basis states exceeds the dimension cap, so the
    // pairing suite must record a skip rather than fail or crash.
    let out = tau2(&["run", "--suite", "pairing", "--N", "2", "--n", "4", "--L", "7", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("[SKIP]"), "expected a skip record:\n{text}");
    assert!(text.contains("0 failed"), "summary should show no failures:\n{text}");
}

#[test]
fn absurd_tolerance_fails_with_exit_one() {
    let out = tau2(&["run", "--suite", "yb", "--N", "3", "--n", "3", "--L", "2", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("[FAIL]"));
}

#[test]
fn spectra_rows_print_to_stdout_without_csv_path() {
    let out = tau2(&[
        "run",
        "--suite", "spectra",
        "--family", "t2",
        "--N", "3",
        "--n", "3",
        "--L", "2",
        "--seed", "5",
        "--t", "0.3+0.1i",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(
        text.contains("family,r,Q,spectral_re,spectral_im,eig_re,eig_im"),
        "CSV header missing:\n{text}"
    );
    let rows = text.lines().filter(|l| l.starts_with("t2,")).count();
    assert_eq!(rows, 9, "expected all 3^2 eigenvalues:\n{text}");
}

#[test]
fn flag_overrides_win_over_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(
        &cfg,
        "suites = [\"gauge\"]\nseed = 11\n\n[setup]\nbase = 3\next = 3\n\n[chain]\nsites = 2\n",
    )
    .unwrap();
    let json = dir.path().join("report.json");
    let out = tau2(&[
        "run",
        "--config", cfg.to_str().unwrap(),
        "--seed", "12",
        "--out-json", json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(v["seed"], 12);
    assert_eq!(v["setup"]["base"], 3);
}
