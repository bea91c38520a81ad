use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bia"))
        .args(args)
        .env_remove("BIA_THREADS")
        .output()
        .expect("bia runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn construct_writes_bundle_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k5.json");
    let status = bia(&["construct", "--users", "5", "--out", out.to_str().unwrap()]).status;
    assert_eq!(status.code(), Some(0));
    let bundle = json(&out);
    assert_eq!(bundle["schema"], 1);
    assert_eq!(bundle["params"]["slots"], 14);
    assert_eq!(bundle["shared_index"].as_array().unwrap().len(), 10);
    assert_eq!(bundle["shared_index"][0]["subset"], serde_json::json!([1, 2]));
    let manifest = json(&dir.path().join("k5.json.manifest.json"));
    assert_eq!(manifest["command"], "construct");
    assert_eq!(manifest["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn construct_small_cases() {
    let out = bia(&["construct", "--users", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let bundle: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(bundle["params"]["slots"], 1);

    let out = bia(&["construct", "-k", "4", "-r", "3", "--mode", "padded"]);
    let bundle: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(bundle["params"]["slots"], 12);
    assert_eq!(bundle["switching"]["matrix"].as_array().unwrap().len(), 12);
}

#[test]
fn infeasible_params_exit_two() {
    let out = bia(&["construct", "--users", "7"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("C(K,r)"), "{err}");
    assert_eq!(
        bia(&["construct", "--users", "3", "--order", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(bia(&["construct"]).status.code(), Some(2));
    assert_eq!(bia(&["dof", "--k", "5..2"]).status.code(), Some(2));
}

#[test]
fn verify_trivial_and_padded_cases_pass() {
    let out = bia(&["verify", "--users", "1", "--seeds", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["all_passed"], true);

    let out = bia(&[
        "verify", "--users", "4", "--order", "2", "--mode", "padded", "--seeds", "5", "--float",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["representation"], "floating");
    assert_eq!(report["seeds_total"], 5);
}

#[test]
fn verify_failure_exits_one_with_report() {
    let out = bia(&["verify", "--users", "3", "--seeds", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["all_passed"], false);
    let failures = report["outcomes"][0]["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f["check"] == "desired-clean"));
}

#[test]
fn verify_reads_a_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let p = path.to_str().unwrap();
    bia(&[
        "construct",
        "--users",
        "3",
        "--order",
        "2",
        "--mode",
        "padded",
        "--out",
        p,
    ]);
    let out = bia(&["verify", "--bundle", p, "--seeds", "4"]);
    assert_eq!(out.status.code(), Some(0));

    let mut bundle = json(&path);
    bundle["basis"]["entries"][0][0] = 1.into();
    std::fs::write(&path, bundle.to_string()).unwrap();
    assert_eq!(bia(&["verify", "--bundle", p]).status.code(), Some(2));
}

#[test]
fn dof_table_rows() {
    let out = bia(&["dof", "--k", "1..100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 101);
    assert_eq!(
        lines[0],
        "K,r_star,d_star_num,d_star_den,d_star_float,ratio_to_half_sqrtK"
    );
    assert!(lines[5].starts_with("5,2,10,7,"));
    let single = String::from_utf8(bia(&["dof", "--k", "7"]).stdout).unwrap();
    assert!(single.lines().nth(1).unwrap().starts_with("7,3,21,13,"));
    let one = String::from_utf8(bia(&["dof", "-k", "1"]).stdout).unwrap();
    assert!(one.lines().nth(1).unwrap().starts_with("1,1,1,1,"));
}

#[test]
fn simulate_single_user_slope() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rates.csv");
    let out = bia(&[
        "simulate",
        "--users",
        "1",
        "--seeds",
        "2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    let slope = summary["summary"]["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.02, "{slope}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("snr_db,user,rate,sum_rate\n"));
    assert_eq!(text.lines().count(), 1 + 5);
}

#[test]
fn simulate_refuses_unverified_construction() {
    let out = bia(&["simulate", "--users", "3", "--seeds", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = bia(&["simulate", "--users", "3", "--seeds", "2", "--allow-unverified"]);
    assert_eq!(out.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["verified"], false);
}

#[test]
fn short_snr_ladder_gives_no_slope() {
    let out = bia(&["simulate", "--users", "1", "--snr-db", "10,20"]);
    assert_eq!(out.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["summary"]["slope"].is_null());
    assert_eq!(
        bia(&["simulate", "--users", "1", "--snr-db", "50,40"]).status.code(),
        Some(2)
    );
}

#[test]
fn bad_thread_count_is_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_bia"))
        .args(["dof", "--k", "3"])
        .env("BIA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_flags_give_identical_payloads() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_bia"))
            .args([
                "simulate", "-k", "4", "-r", "2", "--mode", "padded", "--seeds", "5", "--trials", "2", "--out",
            ])
            .arg(&path)
            .env("BIA_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        (
            std::fs::read(&path).unwrap(),
            json(&dir.path().join(format!("{name}.manifest.json"))),
        )
    };
    let (a, ma) = run("a.csv", "1");
    let (b, mb) = run("b.csv", "3");
    assert_eq!(a, b);
    assert_eq!(ma["outputs"][0]["sha256"], mb["outputs"][0]["sha256"]);
    assert_eq!(ma["seeds"], serde_json::json!([0, 1, 2, 3, 4]));
}
