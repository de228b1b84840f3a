use std::process::Command;

use contextual_heat::scenario::{read_csv, ScenarioConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contextual-heat"))
}

#[test]
fn builtin_configs_parse_back() {
    for name in ["micadei", "qutrit-demo"] {
        let out = bin().args(["builtin", name]).output().unwrap();
        assert!(out.status.success());
        let cfg = ScenarioConfig::from_json_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
        cfg.validate().unwrap();
    }
}

#[test]
fn sweep_from_config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("m.json");
    let status = bin().args(["builtin", "micadei", "--output"]).arg(&cfg).status().unwrap();
    assert!(status.success());
    let csv = dir.path().join("out/m.csv");
    let status = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--n-points", "2000", "--t-max", "1e-3", "-o"])
        .arg(&csv)
        .status()
        .unwrap();
    assert!(status.success());
    let records = read_csv(&csv).unwrap();
    assert_eq!(records.len(), 2000);
    assert!(records[1].violates);
    assert!((records[1999].t - 1e-3).abs() < 1e-18);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .env("CONTEXTUAL_HEAT_OUT_DIR", dir.path())
        .args(["sweep", "--builtin", "qutrit-demo", "--n-points", "500", "--format", "json"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("sweep.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 500);
    assert!(v["critical_times"][0].as_f64().unwrap() > 0.0);
    assert_eq!(v["seed"], 7);
}

#[test]
fn config_errors_exit_with_two() {
    let out = bin().args(["sweep", "--builtin", "micadei", "--n-points", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("time_grid.n_points"));

    let out = bin().args(["sweep", "--builtin", "micadei", "--eta", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = bin().args(["sweep", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));
}

#[test]
fn decomposition_fails_with_three() {
    // p_d = 0 for a nontrivial unitary cannot be decomposed
    let out = bin()
        .args(["verify-decomposition", "--interaction", "partial-swap", "--t", "0.4", "--p-d", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_decomposition_and_choi() {
    let out = bin()
        .args(["verify-decomposition", "--interaction", "resonant-a", "--a", "0", "--t", "0.6", "--search"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_cptp"], true);
    let minimal = v["minimal_p_d"].as_f64().unwrap();
    assert!((minimal - 0.3f64.sin().powi(2)).abs() < 1e-8);

    let out = bin().args(["choi", "--interaction", "resonant-theta", "--theta", "0.785", "--t", "0.3"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ev: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((ev[15] - 4.0).abs() < 1e-9);
}

#[test]
fn clausius_and_critical_time() {
    let out = bin().args(["clausius", "--builtin", "micadei", "--t", "1e-4"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["result"]["q_a"].as_f64().unwrap() > 0.0);
    assert!(v["result"]["delta_mutual_info"].as_f64().unwrap() < 0.0);
    assert_eq!(v["identity_holds"], true);

    let out = bin().args(["critical-time", "--builtin", "micadei"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let tc = v["tau_c"].as_f64().unwrap();
    assert!((tc - 1.85e-4).abs() < 0.05 * 1.85e-4);
}
