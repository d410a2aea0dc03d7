use std::process::{Command, Output};

use serde_json::Value;

const PNF: &str = env!("CARGO_BIN_EXE_pnf");

fn pnf(args: &[&str]) -> Output {
    Command::new(PNF).args(args).env_remove("PNF_CACHE").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn field_info_reports_factorizations() {
    let out = pnf(&["field-info", "-p", "7", "-n", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["qn"], 49);
    assert_eq!(v["group_order"], "2^4 3^1");
    assert_eq!(v["xn_minus_1_omega"], 2);
}

#[test]
fn check_emits_membership_and_criterion() {
    let v = json(&pnf(&["check", "-p", "5", "-n", "2"]));
    assert_eq!(v["membership"]["witness_count"], 2);
    assert_eq!(v["membership"]["excluded_char"], false);
    assert_eq!(v["criterion"]["route"], "direct-4.1");
    assert_eq!(v["criterion"]["verdict"], "false");

    let v = json(&pnf(&["check", "-p", "3", "-n", "2"]));
    assert_eq!(v["membership"]["excluded_char"], true);
}

#[test]
fn criterion_only_skips_enumeration() {
    let v = json(&pnf(&["check", "-p", "11", "-k", "7", "-n", "35", "--criterion-only"]));
    assert!(v["membership"].is_null());
    assert_eq!(v["criterion"]["verdict"], "true");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(pnf(&["check", "-p", "4", "-n", "2"]).status.code(), Some(2));
    assert_eq!(pnf(&["scan", "--p-range", "x..y", "--n-range", "1..2"]).status.code(), Some(2));
    assert_eq!(pnf(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sums_exit_status_tracks_bounds() {
    let ok = pnf(&["sums", "-p", "7", "-n", "2"]);
    assert!(ok.status.success());
    let v = json(&ok);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["terms"].as_array().unwrap().len(), 16);
    let broken = pnf(&["sums", "-p", "11", "-n", "2"]);
    assert_eq!(broken.status.code(), Some(1));
    assert_eq!(json(&broken)["N_rounded"], 10);
}

#[test]
fn empty_scan_is_empty() {
    let out = pnf(&["scan", "--p-range", "8..10", "--n-range", "1..3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn scan_to_file_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let args = ["scan", "--p-range", "5..7", "--n-range", "2..3", "--out", csv.to_str().unwrap()];
    assert!(pnf(&args).status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# schema: 1");
    assert_eq!(lines.len(), 2 + 4);
    assert!(lines[2].starts_with("5,1,2,5,25,2,"));

    let out = pnf(&["scan", "--p-range", "5..7", "--n-range", "2..3", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["summary"]["with_witness"], 4);
}

#[test]
fn factor_cache_is_populated() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("factors.tsv");
    let out = Command::new(PNF)
        .args(["check", "-p", "7", "-n", "3", "--criterion-only"])
        .env("PNF_CACHE", &cache)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.lines().any(|l| l.starts_with("342\t")), "{text}");
}

#[test]
fn quick_verify_passes() {
    let out = pnf(&["verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 failed"));
}
