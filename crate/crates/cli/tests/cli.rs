//! Black-box tests of the binary: exit codes, output formats, and
//! byte-for-byte reproducibility.

use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_conformable");

fn run(args: &[&str]) -> (Option<i32>, String, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (
        out.status.code(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn green_csv_has_header_and_corner_value() {
    let (code, stdout, _) = run(&[
        "green", "--alpha", "0.5", "--grid", "3", "--format", "csv",
    ]);
    assert_eq!(code, Some(0));
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("t,s,G"));
    // 3x3 grid -> 9 data rows, row-major in t
    assert_eq!(stdout.lines().count(), 10);
    // G(0, s) = 0 for the conjugate kernel
    assert!(stdout.lines().nth(1).unwrap().ends_with(",0.0000000000000000e0"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "solve", "--alpha", "0.75", "--beta", "0.5", "--f", "1 + x^2/2", "--r", "0.01", "--R",
        "0.5", "--grid", "129", "--format", "csv",
    ];
    let (c1, out1, _) = run(&args);
    let (c2, out2, _) = run(&args);
    assert_eq!(c1, Some(0));
    assert_eq!(c1, c2);
    assert_eq!(out1, out2, "same configuration must reproduce the same bytes");
    assert!(out1.starts_with("t,x\n"));
}

#[test]
fn failed_certification_exits_2_with_report() {
    // f = 2 violates the growth cap for this (r, R)
    let (code, stdout, _) = run(&[
        "certify", "--alpha", "1", "--beta", "0.5", "--f", "2", "--r", "0.011", "--R", "0.36",
        "--grid", "101",
    ]);
    assert_eq!(code, Some(2));
    assert!(stdout.contains("\"status\": \"failed_cond_i\""));
}

#[test]
fn solve_on_failed_certification_exits_2() {
    let (code, stdout, stderr) = run(&[
        "solve", "--alpha", "1", "--beta", "0.5", "--f", "2", "--r", "0.011", "--R", "0.36",
        "--grid", "101",
    ]);
    assert_eq!(code, Some(2));
    assert!(stdout.is_empty());
    assert!(stderr.contains("failed_cond_i"));
}

#[test]
fn expression_error_exits_1_with_offset() {
    let (code, _, stderr) = run(&[
        "certify", "--alpha", "1", "--beta", "0.5", "--f", "1 + y", "--r", "0.01", "--R", "0.4",
    ]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("byte 4"), "stderr: {stderr}");
}

#[test]
fn usage_error_exits_1() {
    let (code, _, stderr) = run(&["certify", "--alpha", "1"]);
    assert_eq!(code, Some(1));
    assert!(!stderr.is_empty());
}

#[test]
fn invalid_order_exits_1() {
    let (code, _, stderr) = run(&[
        "certify", "--alpha", "1.5", "--beta", "0.5", "--f", "1", "--r", "0.01", "--R", "0.4",
    ]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("alpha"));
}

#[test]
fn thread_env_var_is_validated() {
    let out = Command::new(BIN)
        .args(["bounds", "--alpha", "1", "--n", "4"])
        .env("CONFORMABLE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(BIN)
        .args(["bounds", "--alpha", "1", "--n", "4"])
        .env("CONFORMABLE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bounds_reports_known_constant() {
    let (code, stdout, _) = run(&["bounds", "--alpha", "1", "--n", "4"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("\"g3\": 2.5000000000000000e-1"));
    assert!(stdout.contains("\"r_cross\": 5.0000000000000000e-1"));
}

#[test]
fn sturm_liouville_family_needs_all_coefficients() {
    let (code, _, stderr) = run(&["green", "--alpha", "0.5", "--family", "sturm-liouville"]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("--gamma"));
    let (code, _, stderr) = run(&[
        "green", "--alpha", "0.5", "--family", "conjugate", "--gamma", "1",
    ]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("sturm-liouville"));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join("conformable-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kernel.csv");
    let (_, stdout, _) = run(&["green", "--alpha", "1", "--grid", "5", "--format", "csv"]);
    let (code, _, _) = run(&[
        "green", "--alpha", "1", "--grid", "5", "--format", "csv", "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}
