use std::process::{Command, Output};

use qnq_core::qasm::parse_qasm_subset;

fn qnq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnq"))
        .args(args)
        .env_remove("QNQ_FORMAT")
        .output()
        .expect("spawn qnq")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn line_value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no {key:?} line in\n{text}"))
        .trim()
}

#[test]
fn solve_four() {
    let out = qnq(&["solve", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("n = 4: 2 solutions\n"));
    assert!(text.contains("0100\n0001\n1000\n0010\n"));
    assert!(text.contains("0010\n1000\n0001\n0100\n"));
    assert_eq!(line_value(&text, "success probability:"), "0.0078125");
}

#[test]
fn solve_small_boards() {
    let out = qnq(&["solve", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("no solutions"));
    let one = stdout(&qnq(&["solve", "1"]));
    assert!(one.starts_with("n = 1: 1 solutions\n\nsolution 1 (cols 0)\n1\n"));
}

#[test]
fn solve_json_report() {
    let out = qnq(&["solve", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["equal"], true);
    assert_eq!(v["success_probability"], 0.0078125);
    assert_eq!(
        v["quantum_solutions"][0],
        serde_json::json!({"n": 4, "cols": [1, 3, 0, 2]})
    );
}

#[test]
fn format_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qnq"))
        .args(["verify", "3"])
        .env("QNQ_FORMAT", "json")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["quantum_solutions"], serde_json::json!([]));
}

#[test]
fn verify_four() {
    let out = qnq(&["verify", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(line_value(&text, "equal:"), "true");
    assert_eq!(line_value(&text, "census ok:"), "true");
}

#[test]
fn counts_tables() {
    let four = stdout(&qnq(&["counts", "4"]));
    let row = |text: &str, name: &str| -> Vec<String> {
        text.lines()
            .find(|l| l.starts_with(name))
            .unwrap()
            .split_whitespace()
            .rev()
            .take(3)
            .map(String::from)
            .collect()
    };
    assert_eq!(row(&four, "qubits"), ["MATCH", "25", "25"]);
    assert_eq!(row(&four, "column-check gates"), ["MATCH", "18", "18"]);
    assert_eq!(row(&four, "diagonal ccx "), ["MATCH", "28", "28"]);
    assert!(!four.contains("MISMATCH"));

    let one = stdout(&qnq(&["counts", "1"]));
    assert_eq!(row(&one, "qubits"), ["MATCH", "1", "1"]);
    assert_eq!(row(&one, "column-check gates"), ["MATCH", "0", "0"]);
    assert_eq!(row(&one, "diagonal ccx "), ["MATCH", "0", "0"]);

    let eight = stdout(&qnq(&["counts", "8"]));
    assert_eq!(row(&eight, "diagonal ccx "), ["MATCH", "280", "280"]);

    let huge = qnq(&["counts", "1000000"]);
    assert_eq!(huge.status.code(), Some(0));
    assert!(stdout(&huge).contains("666665666667000000"));
    assert_eq!(qnq(&["counts", "1000001"]).status.code(), Some(2));
}

#[test]
fn sample_is_reproducible() {
    let a = qnq(&["sample", "4", "--shots", "310", "--seed", "1"]);
    let b = qnq(&["sample", "4", "--shots", "310", "--seed", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let distinct: usize = line_value(&text, "distinct outcomes:").parse().unwrap();
    assert!((150..=205).contains(&distinct));
    assert_eq!(line_value(&text, "ancilla mismatches:"), "0");
}

#[test]
fn sample_edge_cases() {
    let one = stdout(&qnq(&["sample", "1", "--shots", "10"]));
    assert_eq!(line_value(&one, "distinct outcomes:"), "1");
    assert!(one.contains("chi-square: n/a"));
    assert_eq!(qnq(&["sample", "4", "--shots", "0"]).status.code(), Some(2));
}

#[test]
fn oracle_five() {
    let text = stdout(&qnq(&["oracle", "5"]));
    assert!(text.starts_with("n = 5: 10 solutions\n"));
    assert_eq!(text.lines().count(), 11);
    let json = qnq(&["oracle", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(
        v,
        serde_json::json!([{"n": 4, "cols": [1, 3, 0, 2]}, {"n": 4, "cols": [2, 0, 3, 1]}])
    );
}

#[test]
fn export_qasm_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nq4.qasm");
    let out = qnq(&["export-qasm", "4", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let circuit = parse_qasm_subset(&text).unwrap();
    assert_eq!(circuit.layout().total_qubits(), 25);
}

#[test]
fn output_failures_name_the_path() {
    let out = qnq(&["oracle", "4", "--out", "/nonexistent-dir/x.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/x.txt"));
}

#[test]
fn simulation_cap() {
    let out = qnq(&["solve", "7"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1647086"));
    assert_eq!(qnq(&["solve", "8", "--max-n", "8"]).status.code(), Some(2));
    assert_eq!(qnq(&["sample", "9", "--shots", "3"]).status.code(), Some(3));
}

#[test]
fn usage_errors() {
    assert_eq!(qnq(&["solve", "0"]).status.code(), Some(2));
    assert_eq!(qnq(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        qnq(&["solve", "4", "--format", "xml"]).status.code(),
        Some(2)
    );
}
