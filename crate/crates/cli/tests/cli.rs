//! End-to-end tests of the `minkspec` binary: exit codes, output
//! determinism, file emission.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_minkspec")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn minkspec")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(bin())
        .args(args)
        .env(key, value)
        .output()
        .expect("spawn minkspec")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn analyze_example1_reports_case_1a() {
    let out = run(&["analyze", data("example1.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("case: 1a"), "{text}");
    let block_lines: Vec<&str> = text
        .lines()
        .filter(|l| l.trim_start().starts_with("type "))
        .collect();
    assert_eq!(block_lines.len(), 5);
    assert_eq!(
        block_lines.iter().filter(|l| l.contains("ε = +1")).count(),
        4
    );
    assert_eq!(
        block_lines.iter().filter(|l| l.contains("ε = -1")).count(),
        1
    );
}

#[test]
fn analyze_json_output_is_machine_readable() {
    let out = run(&["analyze", data("example2.json").to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["case"], "4d");
    assert_eq!(value["signature"], serde_json::json!([2, 1]));
    assert_eq!(value["blocks"][0]["block_type"], 4);
}

#[test]
fn analyze_unobservable_is_reducible() {
    let out = run(&[
        "analyze",
        data("unobservable.json").to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["case"], "REDUCIBLE");
    assert_eq!(value["observable"], false);
    assert_eq!(value["unobservable_dimension"], 1);
    assert_eq!(value["detached_spectrum"], serde_json::json!([1.0]));
}

#[test]
fn critical_a_lists_six_rows_for_example1() {
    let out = run(&[
        "critical-a",
        data("example1.json").to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0]["resulting_case"], "1b");
    assert_eq!(rows[5]["resulting_case"], "3b");
}

#[test]
fn sweep_csv_is_deterministic_with_exact_row_arithmetic() {
    let dir = std::env::temp_dir();
    let csv1 = dir.join("minkspec_sweep_det_1.csv");
    let csv2 = dir.join("minkspec_sweep_det_2.csv");
    for path in [&csv1, &csv2] {
        let out = run(&[
            "sweep",
            data("example2.json").to_str().unwrap(),
            "--a-min",
            "2.0",
            "--a-max",
            "2.000001",
            "--steps",
            "2",
            "--csv",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&csv1).unwrap();
    let b = std::fs::read(&csv2).unwrap();
    assert_eq!(a, b, "byte-identical CSV across runs");
    let text = String::from_utf8(a).unwrap();
    // steps = 2, n = 3 branches, no census change: header + 6 rows
    assert_eq!(text.lines().count(), 1 + 2 * 3);
    std::fs::remove_file(csv1).ok();
    std::fs::remove_file(csv2).ok();
}

#[test]
fn sweep_of_example2_populates_complex_window() {
    let dir = std::env::temp_dir();
    let csv = dir.join("minkspec_sweep_window.csv");
    let svg = dir.join("minkspec_sweep_window.svg");
    let out = run(&[
        "sweep",
        data("example2.json").to_str().unwrap(),
        "--a-min",
        "-3",
        "--a-max",
        "3",
        "--steps",
        "601",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "a,branch_index,re,im,case_label");
    let mut complex_rows = 0usize;
    let mut rows = 0usize;
    for line in lines {
        rows += 1;
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 5);
        let a: f64 = cols[0].parse().unwrap();
        let im: f64 = cols[3].parse().unwrap();
        if im != 0.0 {
            complex_rows += 1;
            assert!(a.abs() < 2.7, "complex pair confined to the central window");
        }
    }
    assert!(
        rows >= 601 * 3,
        "at least steps x branches rows, got {rows}"
    );
    assert!(
        complex_rows > 100,
        "complex window populated: {complex_rows}"
    );
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.contains("stroke-dasharray"));
    std::fs::remove_file(csv).ok();
    std::fs::remove_file(svg).ok();
}

#[test]
fn nu_curves_csv_has_matched_columns() {
    let dir = std::env::temp_dir();
    let csv = dir.join("minkspec_nu.csv");
    let out = run(&[
        "nu-curves",
        data("example2.json").to_str().unwrap(),
        "--center",
        "0",
        "--window",
        "1",
        "--samples",
        "41",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "lambda,nu_1,nu_2,nu_3");
    assert_eq!(lines.count(), 41);
    std::fs::remove_file(csv).ok();
}

#[test]
fn verify_passes_on_the_worked_examples() {
    for file in ["example1.json", "example2.json", "unobservable.json"] {
        let out = run(&["verify", data(file).to_str().unwrap()]);
        let text = stdout(&out);
        assert_eq!(out.status.code(), Some(0), "{file}: {text}");
        assert!(text.contains("verify: PASS"), "{file}: {text}");
        assert!(!text.contains("[FAIL]"), "{file}: {text}");
    }
}

#[test]
fn parse_and_validation_failures_exit_2() {
    // missing file
    let out = run(&["analyze", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed JSON
    let dir = std::env::temp_dir();
    let bad = dir.join("minkspec_bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // unknown key
    std::fs::write(&bad, r#"{"mu": [1], "d": [1], "a": 0, "bogus": true}"#).unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // ascending poles
    std::fs::write(&bad, r#"{"mu": [1, 2], "d": [1, 1], "a": 0}"#).unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // non-Hermitian matrix
    std::fs::write(
        &bad,
        r#"{"J": [[[0,0],[0,1]],[[0,1],[0,0]]], "u": [[1,0],[0,0]], "a": 0}"#,
    )
    .unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // usage errors
    let out = run(&["analyze"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["frobnicate", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["sweep", bad.to_str().unwrap(), "--a-min", "0"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(bad).ok();
}

#[test]
fn tolerance_scale_env_is_honored() {
    // nonsense value: exit 2
    let out = run_env(
        &["analyze", data("example1.json").to_str().unwrap()],
        "MINKSPEC_TOL",
        "banana",
    );
    assert_eq!(out.status.code(), Some(2));
    // an absurdly inflated scale wrecks the censuses: internal failure, exit 3
    let out = run_env(
        &["analyze", data("example1.json").to_str().unwrap()],
        "MINKSPEC_TOL",
        "1e8",
    );
    assert_eq!(out.status.code(), Some(3));
    // a harmless scale still answers
    let out = run_env(
        &["analyze", data("example1.json").to_str().unwrap()],
        "MINKSPEC_TOL",
        "10",
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn json_error_reporting_on_request() {
    let dir = std::env::temp_dir();
    let bad = dir.join("minkspec_badjson_err.json");
    std::fs::write(&bad, r#"{"mu": [1, 2], "d": [1, 1], "a": 0}"#).unwrap();
    let out = run(&["analyze", bad.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr is a JSON object");
    assert_eq!(err["exit_code"], 2);
    assert!(err["error"].as_str().unwrap().contains("decreasing"));
    std::fs::remove_file(bad).ok();
}

#[test]
fn help_prints_usage() {
    let out = run(&["help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("usage:"));
}
