//! End-to-end runs of the `infolearn` binary.

use std::fs;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_infolearn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.txt");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn mi_exact_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "class = point-functions\nlearner = generic\ntarget = 1\nn = 6\nm = 2\n",
    );
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    for out in [&out1, &out2] {
        let result = run(&[
            "mi-exact",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(result.status.success(), "{result:?}");
    }
    for file in ["report.json", "grid.csv"] {
        let a = fs::read(out1.join(file)).unwrap();
        let b = fs::read(out2.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
    // the point-function bound shows up in the report
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(out1.join("report.json")).unwrap()).unwrap();
    let mi = report["rows"][0]["mi"].as_f64().unwrap();
    assert!(mi <= 2.0 + 1e-9);
    assert_eq!(report["rows"][0]["status"], "ok");
}

#[test]
fn grid_covers_the_cross_product_and_isolates_failures() {
    let dir = tempfile::tempdir().unwrap();
    // m = 9 exceeds the tiny budget below; the other cells still complete
    let config = write_config(
        dir.path(),
        "class = thresholds\nlearner = generic\ntarget = 4\nn = 8\nn = 16\nm = 2\nm = 9\nbudget = 100000\n",
    );
    let out = dir.path().join("out");
    let result = run(&[
        "mi-exact",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success());

    let csv = fs::read_to_string(out.join("grid.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "N,m,eps,delta,mi,bound,frequency,stderr,method,seed,status"
    );
    assert_eq!(lines.len(), 5); // header + 4 cells

    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    // thresholds have a signature fast path, so even the big cells succeed
    assert!(rows.iter().all(|r| r["status"] == "ok"));
}

#[test]
fn missing_seed_on_stochastic_kind_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "class = thresholds\nlearner = generic\ntarget = 4\nn = 8\nm = 5\neps = 0.2\n",
    );
    let result = run(&[
        "gen-gap",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("seed"), "stderr: {stderr}");
}

#[test]
fn unknown_keys_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "class = thresholds\nbanana = 3\nn = 8\nm = 2\n");
    let result = run(&[
        "mi-exact",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("banana"), "stderr: {stderr}");
}

#[test]
fn stochastic_kinds_reproduce_with_workers() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "class = thresholds\nlearner = generic\ntarget = 8\nmarginal = uniform\n\
         n = 16\nm = 10\nm = 20\neps = 0.2\neps = 0.3\nseed = 7\ntrials = 2000\n",
    );
    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");
    for (out, workers) in [(&serial, "1"), (&parallel, "4")] {
        let result = run(&[
            "gen-gap",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--workers",
            workers,
        ]);
        assert!(result.status.success(), "{result:?}");
    }
    for file in ["report.json", "grid.csv"] {
        assert_eq!(
            fs::read(serial.join(file)).unwrap(),
            fs::read(parallel.join(file)).unwrap(),
            "{file} depends on worker count"
        );
    }
}

#[test]
fn env_var_overrides_the_enumeration_budget() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "class = point-functions\nlearner = generic\ntarget = 1\nn = 6\nm = 3\nbudget = 1000000\n",
    );
    let out = dir.path().join("out");
    let result = Command::new(env!("CARGO_BIN_EXE_infolearn"))
        .args([
            "stability",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .env("INFOLEARN_BUDGET", "10")
        .output()
        .expect("binary runs");
    assert!(result.status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["budget"], 10);
    let status = report["rows"][0]["status"].as_str().unwrap();
    assert!(status.contains("budget"), "status: {status}");
}

#[test]
fn lower_bound_kind_emits_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "learner = min-threshold-erm\nn = 16\nm = 4\n");
    let out = dir.path().join("out");
    let result = run(&[
        "lower-bound",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();
    let row = &report["rows"][0];
    assert_eq!(row["status"], "ok");
    let detail = &row["detail"];
    assert_eq!(detail["n"], 16);
    assert!(detail["exact_mi_bits"].as_f64().unwrap() >= detail["floor_bits"].as_f64().unwrap());
    assert!(detail["pr_event"].as_f64().unwrap() > 0.0);
}
