mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::{small_config, write_ehr};

fn ehrsev(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehrsev")).args(args).current_dir(cwd).env("RUST_LOG", "warn").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn summarize_writes_summary_files() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_ehr(dir.path(), 80, 1);
    let o = ehrsev(&["summarize", "--data", data.to_str().unwrap(), "--out", "sum", "--strict"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("sum/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["n_rows"], 80);
    assert!(dir.path().join("sum/summary.csv").exists());
}

#[test]
fn run_and_compare_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_ehr(dir.path(), 150, 2);
    let cfg = small_config(&data, &dir.path().join("ignored"));
    let cfg_path = dir.path().join("cfg.json");
    fs::write(&cfg_path, cfg.to_json()).unwrap();
    let cfg_arg = cfg_path.to_str().unwrap();

    let o = ehrsev(&["run", "--config", cfg_arg, "--out", "run", "--seed", "11"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("run/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 11);

    let actual = dir.path().join("run/supervised_metrics.csv");
    let reference = dir.path().join("ref.csv");
    fs::copy(&actual, &reference).unwrap();
    let args = |tol: &str| -> Vec<String> {
        vec![
            "compare".into(),
            "--actual".into(),
            actual.to_str().unwrap().into(),
            "--reference".into(),
            reference.to_str().unwrap().into(),
            "--tolerance".into(),
            tol.into(),
        ]
    };
    let run = |a: Vec<String>| ehrsev(&a.iter().map(String::as_str).collect::<Vec<_>>(), dir.path());
    assert_eq!(code(&run(args("accuracy=0"))), 0);

    let mut table = ehrsev::ReportTable::read_csv(&actual).unwrap();
    let v = table.rows[0].values[0].unwrap();
    table.rows[0].values[0] = Some(v + 0.3);
    fs::write(&reference, table.to_csv()).unwrap();
    let o = run(args("accuracy=0.01"));
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains(&format!("FAIL {}.accuracy", table.rows[0].label)));

    fs::write(&reference, "algorithm,nonexistent_metric\ntree,0.5\n").unwrap();
    assert_eq!(code(&run(args("nonexistent_metric=0.1"))), 2);
}

#[test]
fn execution_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = ehrsev(&["run"], dir.path());
    assert_eq!(code(&o), 2);
    let o = ehrsev(&["summarize", "--data", "missing.csv"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.csv"));
    let o = ehrsev(&["reproduce", "--table", "11", "--data", "missing.csv", "--out", "rep"], dir.path());
    assert_eq!(code(&o), 2);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rep/table_11/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["failed_stage"], "load");
    assert_ne!(code(&ehrsev(&["reproduce", "--table", "15"], dir.path())), 0);
}

#[test]
fn save_then_load_model() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_ehr(dir.path(), 150, 3);
    let cfg = small_config(&data, &dir.path().join("o"));
    let cfg_path = dir.path().join("cfg.json");
    fs::write(&cfg_path, cfg.to_json()).unwrap();
    let o = ehrsev(&["save-model", "--config", cfg_path.to_str().unwrap(), "--model", "glm", "--path", "glm.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = ehrsev(&["load-model", "--path", "glm.json", "--data", data.to_str().unwrap(), "--out", "pred"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let preds = fs::read_to_string(dir.path().join("pred/predictions.csv")).unwrap();
    assert_eq!(preds.lines().count(), 151);
    let metrics: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("pred/metrics.json")).unwrap()).unwrap();
    assert_eq!(metrics["algorithm"], "glm");
    assert!(metrics["accuracy"].as_f64().unwrap() > 0.6);
    fs::write(dir.path().join("junk.json"), "{}").unwrap();
    let o = ehrsev(&["load-model", "--path", "junk.json", "--data", data.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 2);
}
