//! Configs, scenario runs, output determinism and sweeps.

use std::fs;
use std::path::{Path, PathBuf};

use affine_vacuum::harness::output::{fmt_f64, to_json};
use affine_vacuum::harness::{load_configs, run_scenario, sweep, ScenarioConfig, ScenarioKind};
use affine_vacuum::Error;
use proptest::prelude::*;

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("harness").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn small(kind: ScenarioKind) -> ScenarioConfig {
    let mut c = ScenarioConfig::new(kind);
    c.n = 64;
    c
}

#[test]
fn shipped_configs_are_valid() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    assert_eq!(load_configs(&root).unwrap().len(), 8);
    assert_eq!(load_configs(&root.join("sweep")).unwrap().len(), 9);
}

#[test]
fn invalid_configs_are_reported_as_such() {
    for text in [
        r#"{"kind": "stability-run", "n": -4}"#,
        r#"{"kind": "stability-run", "gamma": 0.9}"#,
        r#"{"kind": "stability-run", "stencil_order": 3}"#,
        r#"{"kind": "no-such-kind"}"#,
        r#"{"kind": "stability-run", "typo": 1}"#,
        r#"{"kind": "convergence-study", "resolutions": [128, 64]}"#,
        "not json",
    ] {
        let err = ScenarioConfig::from_json(text).and_then(|c| c.validate());
        assert!(matches!(err, Err(Error::ConfigInvalid(_))), "{text}");
    }
}

#[test]
fn invalid_config_writes_nothing() {
    let dir = scratch("invalid");
    let mut c = small(ScenarioKind::StabilityRun);
    c.cfl = 2.0;
    assert!(matches!(run_scenario(&c, Some(&dir.join("run"))), Err(Error::ConfigInvalid(_))));
    assert!(!dir.join("run").exists());
}

#[test]
fn affine_scenario_writes_its_files() {
    let dir = scratch("affine");
    let mut c = small(ScenarioKind::AffineExactness);
    c.tau_final = Some(1.0);
    let s = run_scenario(&c, Some(&dir)).unwrap();
    assert!(s.passed, "{s:?}");
    for f in ["motion.csv", "growth.svg", "summary.json"] {
        assert!(dir.join(f).is_file(), "{f}");
    }
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    for key in ["checks", "config", "files", "kind", "metrics", "name", "passed"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["kind"], "affine-exactness");
}

#[test]
fn runs_are_byte_identical() {
    let mut c = small(ScenarioKind::StabilityRun);
    c.tau_final = Some(4.0);
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    run_scenario(&c, Some(&a)).unwrap();
    run_scenario(&c, Some(&b)).unwrap();
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 5);
    for f in names {
        assert_eq!(fs::read(a.join(&f)).unwrap(), fs::read(b.join(&f)).unwrap(), "{f:?}");
    }
}

#[test]
fn cheap_kinds_pass() {
    let mut lwp = small(ScenarioKind::LwpIteration);
    lwp.n = 128;
    let mut ops = small(ScenarioKind::OperatorProperties);
    ops.resolutions = Some(vec![32, 64, 128]);
    ops.draws = 8;
    let mut emb = small(ScenarioKind::EmbeddingSurvey);
    emb.draws = 8;
    for c in [lwp, ops, emb] {
        let s = run_scenario(&c, None).unwrap();
        assert!(s.passed, "{}: {:?}", c.kind.as_str(), s.checks.iter().filter(|k| !k.passed).collect::<Vec<_>>());
    }
}

#[test]
fn summary_records_runtime_errors() {
    let mut c = small(ScenarioKind::StabilityRun);
    c.initial = c.initial.clone();
    c.initial.epsilon = 0.1;
    c.initial.lambda = 0.1;
    c.tau_final = Some(5.0);
    c.dtau = Some(5.0);
    let s = run_scenario(&c, None).unwrap();
    assert!(!s.passed);
    assert!(s.error.is_some());
    assert_eq!(s.exit_code(), 1);
}

#[test]
fn sweeps_are_independent_of_job_count() {
    let mut c = small(ScenarioKind::StabilityRun);
    c.tau_final = Some(4.0);
    let configs = vec![("a.json".to_string(), c.clone()), ("b.json".to_string(), c)];
    let one = sweep(&configs, 1, None).unwrap();
    let two = sweep(&configs, 2, Some(&scratch("sweep"))).unwrap();
    assert_eq!(one, two);
    assert_eq!(one.rows.len(), 2);
    let (a, b) = (&one.rows[0], &one.rows[1]);
    assert_eq!((a.sup_sn, a.c_star, a.passed), (b.sup_sn, b.c_star, b.passed));
    assert!(a.error.is_none(), "{:?}", a.error);
    assert!(one.all_c_star_finite && one.c_star_max.is_finite());
    let dir = scratch("sweep");
    sweep(&configs, 2, Some(&dir)).unwrap();
    for f in ["sweep.json", "sweep.csv", "a.json/summary.json", "b.json/summary.json"] {
        assert!(dir.join(f).exists(), "{f}");
    }
}

#[test]
fn empty_sweep_is_trivially_successful() {
    let report = sweep(&[], 1, None).unwrap();
    assert_eq!(report.exit_code(), 0);
    assert!(report.all_c_star_finite);
    assert!(to_json(&report).unwrap().contains("\"c_star_max\": null"));
}

#[test]
fn one_bad_file_invalidates_the_sweep() {
    let dir = scratch("bad-sweep");
    fs::write(dir.join("good.json"), r#"{"kind": "affine-exactness"}"#).unwrap();
    fs::write(dir.join("bad.json"), r#"{"kind": "affine-exactness", "n": 3}"#).unwrap();
    assert!(matches!(load_configs(&dir), Err(Error::ConfigInvalid(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn floats_round_trip_through_json(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        let text = to_json(&vec![x]).unwrap();
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back[0], x);
    }

    #[test]
    fn configs_round_trip(gamma in 1.01f64..3.0, n in 4usize..64, seed in any::<u64>(), eps in 0.0f64..0.1) {
        let mut c = ScenarioConfig::new(ScenarioKind::StabilityRun);
        c.gamma = gamma;
        c.n = 4 * n;
        c.seed = seed;
        c.initial.epsilon = eps;
        prop_assert!(c.validate().is_ok());
        let back = ScenarioConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }
}
