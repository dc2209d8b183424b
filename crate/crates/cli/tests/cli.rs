use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi-freeze"))
        .args(args)
        .env_remove("JACOBI_FREEZE_SEED")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn zeros_json() {
    let out = run(&["zeros", "--n", "2", "--a", "0", "--b", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "zeros");
    let z: Vec<f64> = serde_json::from_value(v["results"]["z"].clone()).unwrap();
    assert!((z[0] + 0.577_350_269_2).abs() < 1e-10);
    assert!((z[1] - 0.577_350_269_2).abs() < 1e-10);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["tolerance"].is_number());
    }
}

#[test]
fn zeros_single_particle() {
    let v = json(&run(&["zeros", "--n", "1", "--a", "1", "--b", "1"]));
    assert_eq!(v["results"]["z"][0].as_f64().unwrap(), -1.0 / 3.0);
}

#[test]
fn invalid_parameter_exits_two() {
    let out = run(&["zeros", "--n", "2", "--a", "0", "--b", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b > 0"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_error_exits_two() {
    assert_eq!(run(&["zeros", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_one() {
    let out = run(&[
        "clt", "--n", "2", "--a", "1", "--b", "1", "--kappa", "50", "--m", "500", "--seed", "3",
        "--threshold", "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["all_pass"], false);
}

#[test]
fn precision_and_spectrum_spot_values() {
    let v = json(&run(&["precision", "--n", "2", "--a", "0", "--b", "1"]));
    assert!((v["results"]["det_S_closed_form"].as_f64().unwrap() - 13.5).abs() < 1e-12);
    assert!((v["results"]["det_S_tilde_closed_form"].as_f64().unwrap() - 96.0).abs() < 1e-11);
    let v = json(&run(&["spectrum", "--n", "2", "--a", "0", "--b", "1"]));
    let ev: Vec<f64> = serde_json::from_value(v["results"]["eigenvalues_numerical"].clone()).unwrap();
    assert!((ev[0] - 8.0).abs() < 1e-12 && (ev[1] - 12.0).abs() < 1e-12);
}

#[test]
fn limits_and_normalization() {
    let v = json(&run(&["limits", "hermite", "--n", "2"]));
    assert!((v["results"]["det_S_limit"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["all_pass"], true);
    let v = json(&run(&["limits", "laguerre", "--n", "2", "--beta", "0", "--alphas", "100,1000,10000"]));
    assert!((v["results"]["det_S_limit"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["all_pass"], true);
    let out = run(&["normalization", "--n", "1", "--a", "1", "--b", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sample_is_byte_identical_and_seed_env_applies() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..3).map(|i| dir.path().join(format!("{i}.csv"))).collect();
    let args = |p: &std::path::Path| {
        vec![
            "sample".to_string(), "--n".into(), "3".into(), "--a".into(), "1".into(), "--b".into(), "1".into(),
            "--kappa".into(), "100".into(), "--m".into(), "2000".into(), "--out".into(), p.display().to_string(),
        ]
    };
    let with_env = |p: &std::path::Path, seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_jacobi-freeze"))
            .args(args(p))
            .env("JACOBI_FREEZE_SEED", seed)
            .output()
            .unwrap()
    };
    let a = with_env(&paths[0], "42");
    let b = with_env(&paths[1], "42");
    with_env(&paths[2], "43");
    let strip = |o: &Output| {
        let mut v = json(o);
        v.as_object_mut().unwrap().remove("timestamp");
        v.to_string()
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(json(&a)["seed"], 42);
    let read = |i: usize| std::fs::read_to_string(&paths[i]).unwrap();
    assert_eq!(read(0), read(1));
    assert_ne!(read(0), read(2));
    let csv = read(0);
    assert!(csv.lines().next().unwrap().starts_with('#'));
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.trim().parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2000);
    assert!(rows.iter().all(|r| r.len() == 3 && r[0] < r[1] && r[1] < r[2]));
}

#[test]
fn human_format() {
    let out = run(&["zeros", "--n", "3", "--a", "1", "--b", "1", "--format", "human"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[PASS] max_stationarity_residual"));
    assert!(text.trim_end().ends_with("overall: PASS"));
}
