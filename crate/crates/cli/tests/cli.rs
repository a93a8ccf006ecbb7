use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qcircle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcircle"))
        .args(args)
        .env_remove("QCIRCLE_CHECKPOINT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn coeffs_small_table() {
    let o = qcircle(&["coeffs", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,g_n\n0,1\n1,1\n2,1\n3,0\n4,0\n5,1\n6,2\n");

    let o = qcircle(&["coeffs", "--n", "0"]);
    assert_eq!(stdout(&o), "n,g_n\n0,1\n");
}

#[test]
fn coeffs_out_file_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.bin");
    let p = path.to_str().unwrap();
    assert_eq!(qcircle(&["coeffs", "--n", "500", "--binary", "--out", p]).status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    assert_eq!(qcircle(&["coeffs", "--n", "500", "--binary", "--out", p]).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&path).unwrap());
    let series = qcircle::series::QSeries::read_binary(first.as_slice()).unwrap();
    assert_eq!(series.coeffs(), qcircle::series::g_series(500).coeffs());
}

fn verify(n: &str, ck: &Path, resume: bool) -> Output {
    let mut args = vec!["verify-nonneg", "--n", n, "--checkpoint-every", "1000"];
    let p = ck.to_str().unwrap();
    args.extend(["--checkpoint", p]);
    if resume {
        args.push("--resume");
    }
    qcircle(&args)
}

#[test]
fn resumed_verification_matches_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = dir.path().join("fresh.json");
    let split = dir.path().join("split.json");

    let o = verify("10000", &fresh, false);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let ledger = json(&o);
    assert_eq!(ledger["verified_up_to"], 10000);
    assert_eq!(ledger["counterexample"], Value::Null);
    assert_eq!(ledger["chain"].as_array().unwrap().len(), 10);

    assert_eq!(verify("5000", &split, false).status.code(), Some(0));
    let o = verify("10000", &split, true);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o), ledger);
    assert_eq!(std::fs::read(&fresh).unwrap(), std::fs::read(&split).unwrap());
}

#[test]
fn corrupted_ledger_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    assert_eq!(verify("3000", &ck, false).status.code(), Some(0));

    let mut ledger: Value = serde_json::from_slice(&std::fs::read(&ck).unwrap()).unwrap();
    ledger["verified_up_to"] = 4000.into();
    std::fs::write(&ck, serde_json::to_vec(&ledger).unwrap()).unwrap();
    assert_eq!(verify("5000", &ck, true).status.code(), Some(4));

    std::fs::write(&ck, b"{ not json").unwrap();
    assert_eq!(verify("5000", &ck, true).status.code(), Some(4));
}

#[test]
fn checkpoint_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qcircle"))
        .args(["verify-nonneg", "--n", "2000", "--checkpoint-every", "1000"])
        .env("QCIRCLE_CHECKPOINT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("verify-nonneg.json").exists());
}

#[test]
fn certify_reports_budget() {
    let o = qcircle(&["certify", "--n", "2.4e14"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["certified"], true);
    assert_eq!(v["n"], "240000000000000");
    for key in ["main1_log", "main2_log", "e_g1_log", "e_g2_log", "g3_log", "margin_log"] {
        assert!(v[key].is_f64(), "{key}");
    }

    let v = json(&qcircle(&["certify", "--n", "1000"]));
    assert_eq!(v["certified"], false);
    assert!(v["reason"].is_string());
}

#[test]
fn farey_order_three() {
    let v = json(&qcircle(&["farey", "--order", "3"]));
    assert_eq!(v["count"], 4);
    assert_eq!(v["fractions"], serde_json::json!(["1/3", "1/2", "2/3", "1/1"]));
    assert_eq!(v["covers"], true);
}

#[test]
fn mainterm_on_the_principal_arc() {
    let v = json(&qcircle(&["mainterm", "--h", "1", "--k", "1", "--x", "100", "--y", "0"]));
    let re = v["main_term_g_re"].as_f64().unwrap();
    let expected = std::f64::consts::PI.powi(2) * 100.0 / 48.0;
    assert!((re - expected).abs() < 1e-12 * expected);

    let v = json(&qcircle(&[
        "mainterm", "--a", "1", "--m", "4", "--h", "1", "--k", "1", "--x", "100",
    ]));
    let re = v["main_term_re"].as_f64().unwrap();
    assert!((re - std::f64::consts::PI.powi(2) * 100.0 / 24.0).abs() < 1e-9);
}

#[test]
fn compare_and_nearpole_tables() {
    let o = qcircle(&["compare", "--n", "10,100"]);
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("n,g_exact,g_asym_log"));
    assert!(lines[2].starts_with("100,161,"));

    let o = qcircle(&["nearpole", "--x-grid", "100,1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 2 * 5 * 2);
    assert!(!stdout(&o).contains(",false"));
}

#[test]
fn identities_pass_at_default_tolerance() {
    let o = qcircle(&["identities", "--k-max", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let o = qcircle(&["--tol", "1e-30", "identities", "--k-max", "30"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(qcircle(&["farey", "--order", "0"]).status.code(), Some(3));
    assert_eq!(qcircle(&["mainterm", "--h", "1", "--k", "2", "--x", "16", "--y", "1"]).status.code(), Some(3));
    assert_eq!(qcircle(&["mainterm", "--a", "1", "--h", "1", "--k", "1", "--x", "100"]).status.code(), Some(3));
    assert_eq!(qcircle(&["compare", "--n", "0"]).status.code(), Some(3));
    assert_eq!(qcircle(&["certify", "--n", "2.45"]).status.code(), Some(3));
    assert_eq!(qcircle(&["nosuch"]).status.code(), Some(3));
    assert_eq!(qcircle(&["--help"]).status.code(), Some(0));
    assert_eq!(qcircle(&["verify-nonneg", "--n", "10", "--resume"]).status.code(), Some(3));
    let o = qcircle(&["coeffs", "--n", "3", "--out", "/proc/forbidden/x"]);
    assert_eq!(o.status.code(), Some(4));
}
