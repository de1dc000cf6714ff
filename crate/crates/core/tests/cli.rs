//! Exit codes and output layout of the command-line tool.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_affine-vacuum")).args(args).output().unwrap();
    out.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn successful_run_exits_zero() {
    let dir = scratch("ok");
    let cfg = dir.join("affine.json");
    fs::write(&cfg, r#"{"kind": "affine-exactness", "n": 32, "tau_final": 1}"#).unwrap();
    let out = dir.join("out");
    assert_eq!(run(&["--out", s(&out), "run", s(&cfg)]), 0);
    assert!(out.join("summary.json").is_file());
}

#[test]
fn failed_run_exits_one() {
    let dir = scratch("failed");
    let cfg = dir.join("big.json");
    fs::write(
        &cfg,
        r#"{"kind": "stability-run", "n": 32, "tau_final": 5, "dtau": 5, "initial": {"epsilon": 0.1, "lambda": 0.1}}"#,
    )
    .unwrap();
    assert_eq!(run(&["--out", s(&dir.join("out")), "run", s(&cfg)]), 1);
}

#[test]
fn invalid_config_exits_two_without_output() {
    let dir = scratch("invalid");
    let cfg = dir.join("bad.json");
    fs::write(&cfg, r#"{"kind": "stability-run", "n": -8}"#).unwrap();
    let out = dir.join("out");
    assert_eq!(run(&["--out", s(&out), "run", s(&cfg)]), 2);
    assert_eq!(run(&["--out", s(&out), "run", s(&dir.join("missing.json"))]), 2);
    assert_eq!(run(&["--out", s(&out), "sweep", s(&dir)]), 2);
    assert!(!out.exists());
}

#[test]
fn sweep_writes_a_report() {
    let dir = scratch("sweep");
    let cfgs = dir.join("cfgs");
    fs::create_dir_all(&cfgs).unwrap();
    for (i, n) in [32, 64].iter().enumerate() {
        fs::write(cfgs.join(format!("c{i}.json")), format!(r#"{{"kind": "affine-exactness", "n": {n}, "tau_final": 1}}"#)).unwrap();
    }
    let out = dir.join("out");
    assert_eq!(run(&["--out", s(&out), "sweep", s(&cfgs), "--jobs", "2"]), 0);
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(out.join("c1").join("summary.json").is_file());
}

#[test]
fn check_ops_exits_zero() {
    let out = scratch("ops");
    assert_eq!(run(&["--out", s(&out), "check-ops", "--order", "1", "--seed", "3"]), 0);
    assert!(out.join("operators.json").is_file());
}
