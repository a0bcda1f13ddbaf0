use std::fs;
use std::process::Command;

use syz_cli::{run, run_scenario, RunConfig, Scenario, Status};

fn strip_runtimes(mut v: serde_json::Value) -> serde_json::Value {
    for c in v["checks"].as_array_mut().unwrap() {
        c["runtime"] = serde_json::Value::Null;
    }
    v
}

#[test]
fn config_defaults_and_validation() {
    let cfg = RunConfig::from_json("{}").unwrap();
    assert_eq!(cfg.params.build().unwrap().n(), 2);
    assert_eq!(cfg.precision.psi_match_tol, 1e-7);

    let cfg = RunConfig::from_json(r#"{"params": {"a": [[1, 0], [0, 2]], "r": [0.5, 1.5, 3.0]}, "seed": 3}"#).unwrap();
    assert_eq!(cfg.params.build().unwrap().n(), 1);

    assert!(RunConfig::from_json(r#"{"params": {"n": 3, "a": [[1, 0], [0, 2]]}}"#).is_err());
    assert!(RunConfig::from_json(r#"{"params": {"a": [[2, 0], [1, 0]]}}"#).is_err());
    assert!(RunConfig::from_json(r#"{"precision": {"mc_samples": 10}}"#).is_err());
    assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
}

#[test]
fn scenario_names_round_trip() {
    for sc in Scenario::ALL {
        assert_eq!(sc.name().parse::<Scenario>().unwrap(), sc);
    }
    assert!("nope".parse::<Scenario>().is_err());
    let cfg = RunConfig { scenario: Some("nope".into()), ..RunConfig::default() };
    assert!(run_scenario(&cfg).is_err());
}

#[test]
fn walls_report_is_deterministic_and_written() {
    let cfg = RunConfig { seed: 11, ..RunConfig::default() };
    let a = run(Scenario::Walls, &cfg).unwrap();
    let b = run(Scenario::Walls, &cfg).unwrap();
    assert!(a.report.pass, "{:?}", a.report.checks);
    let ja = strip_runtimes(serde_json::to_value(&a.report).unwrap());
    let jb = strip_runtimes(serde_json::to_value(&b.report).unwrap());
    assert_eq!(ja, jb);
    assert_eq!(a.report.anchors().len(), a.report.checks.len());

    let dir = tempfile::tempdir().unwrap();
    a.write(dir.path()).unwrap();
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["scenario"], "walls");
    assert!(report["checks"][0]["anchor"].is_string());
    let table = fs::read_to_string(dir.path().join("beta_table.csv")).unwrap();
    assert!(table.starts_with("n,l,subset_mask,beta,delta,S"));
    // n = 2: subsets of [l] for l = 0..3
    assert_eq!(table.lines().count(), 1 + 1 + 2 + 4 + 8);
}

#[test]
fn module_errors_become_failed_checks() {
    let mut cfg = RunConfig::default();
    cfg.collision.twist_index = 7;
    let out = run(Scenario::Collision, &cfg).unwrap();
    assert!(!out.report.pass);
    let bad: Vec<_> = out.report.checks.iter().filter(|c| c.status == Status::Fail).collect();
    assert_eq!(bad.len(), 2);
    assert!(bad.iter().all(|c| c.detail.as_deref().unwrap().starts_with("error:")));
    assert!(out.report.checks.iter().any(|c| c.name == "degenerate-f-matches" && c.passed()));
}

#[test]
fn binary_exit_code_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    fs::write(&cfg_path, r#"{"seed": 5}"#).unwrap();
    let out_dir = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_syz"))
        .args(["collision", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stdout));
    assert!(out_dir.join("report.json").exists());
    let track = fs::read_to_string(out_dir.join("delta_track.csv")).unwrap();
    assert!(track.starts_with("t,count,radii"));

    fs::write(&cfg_path, r#"{"collision": {"twist_index": 9}}"#).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_syz"))
        .args(["collision", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&out_dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}
