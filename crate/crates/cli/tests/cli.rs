use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_secidx"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn fixture(dir: &TempDir, name: &str) -> PathBuf {
    let out = run(&["fixture", name]);
    assert_eq!(code(&out), 0);
    write(dir, &format!("{name}.json"), &stdout(&out))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TOY_GOOD_CODE: &str = r#"{"m": 1, "modulus": "0x3", "t": [1, 1, 1], "r": 2, "M": [["1", "0", "0"], ["0", "1", "1"]]}"#;
const TOY_IDENTITY_CODE: &str =
    r#"{"m": 1, "modulus": "0x3", "t": [1, 1, 1], "r": 3, "M": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}"#;

#[test]
fn analyze_toy_text_and_json() {
    let dir = TempDir::new().unwrap();
    let toy = fixture(&dir, "toy");
    let out = run(&["analyze", s(&toy)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("beta_S-MAIS: 2"));

    let out = run(&["analyze", s(&toy), "--json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["smais"]["beta"], 2);
    assert_eq!(v["sflpcc"]["rate"], "1/2");
    assert_eq!(v["outer"]["rate"], "1/2");
    assert_eq!(v["capacity"]["symmetric_capacity"], "1/2");
}

#[test]
fn structured_reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let p = fixture(&dir, "example2");
    let a = run(&["analyze", s(&p), "--json"]);
    let b = run(&["analyze", s(&p), "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_example1() {
    let dir = TempDir::new().unwrap();
    let p = fixture(&dir, "example1");
    let out = run(&["analyze", s(&p), "--json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["beta_mais"], 3);
    assert_eq!(v["smais"]["beta"], 4);
    assert_eq!(v["sflpcc"]["rate"], "1/4");
    assert_eq!(v["capacity"]["symmetric_capacity"], "1/4");
    assert_eq!(v["capacity"]["basis"], "bounds-meet");
}

#[test]
fn analyze_example2_exits_infeasible() {
    let dir = TempDir::new().unwrap();
    let p = fixture(&dir, "example2");
    let out = run(&["analyze", s(&p), "--json", "--no-outer"]);
    assert_eq!(code(&out), 2);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["subset_chain"]["infeasible"], true);
    assert_eq!(v["rho_excess"]["infeasible"], true);
    assert_eq!(v["outer"]["status"], "skipped");
}

#[test]
fn no_security_quantities_coincide() {
    let dir = TempDir::new().unwrap();
    let p = fixture(&dir, "example1-open");
    let out = run(&["analyze", s(&p), "--json", "--no-outer"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["beta_mais"], v["smais"]["beta"]);
    assert_eq!(v["flpcc"]["rate"], v["sflpcc"]["rate"]);
}

#[test]
fn malformed_problem_reports_the_receiver() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", r#"{"n": 3, "A": [[], [2], []], "P": [[], [], []]}"#);
    let out = run(&["analyze", s(&p)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("receiver 2"), "{}", stderr(&out));
    let p = write(&dir, "cut.json", r#"{"n": 3, "A": [[], [3]"#);
    assert_eq!(code(&run(&["analyze", s(&p)])), 1);
    assert_eq!(code(&run(&["analyze", "/nonexistent/problem.json"])), 1);
}

#[test]
fn verify_toy_codes() {
    let dir = TempDir::new().unwrap();
    let toy = fixture(&dir, "toy");
    let good = write(&dir, "good.json", TOY_GOOD_CODE);
    let out = run(&["verify", s(&toy), s(&good)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    let id = write(&dir, "id.json", TOY_IDENTITY_CODE);
    let out = run(&["verify", s(&toy), s(&id), "--json"]);
    assert_eq!(code(&out), 2);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["decoding_pass"], true);
    let failures: Vec<&Value> = v["security"].as_array().unwrap().iter().filter(|c| c["pass"] == false).collect();
    assert_eq!(failures.len(), 2);
    assert!(failures.iter().all(|c| c["receiver"] == 1));
}

#[test]
fn verify_rejects_bad_code_files() {
    let dir = TempDir::new().unwrap();
    let toy = fixture(&dir, "toy");
    let cut = write(&dir, "cut.json", &TOY_GOOD_CODE[..40]);
    assert_eq!(code(&run(&["verify", s(&toy), s(&cut)])), 1);
    let short = write(&dir, "short.json", r#"{"m": 1, "modulus": "0x3", "t": [1, 1], "r": 1, "M": [["1", "1"]]}"#);
    assert_eq!(code(&run(&["verify", s(&toy), s(&short)])), 1);
    let ragged = write(&dir, "ragged.json", r#"{"m": 1, "modulus": "0x3", "t": [1, 1, 1], "r": 2, "M": [["1", "0", "0"], ["1"]]}"#);
    assert_eq!(code(&run(&["verify", s(&toy), s(&ragged)])), 1);
}

#[test]
fn construct_then_verify() {
    let dir = TempDir::new().unwrap();
    let toy = fixture(&dir, "toy");
    let out_path = dir.path().join("code.json");
    let out = run(&["construct", s(&toy), "--field", "1", "--seed", "3", "--budget", "8", "-o", s(&out_path)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(code(&run(&["verify", s(&toy), s(&out_path)])), 0);
}

#[test]
fn construct_single_message_gives_identity() {
    let dir = TempDir::new().unwrap();
    let p = fixture(&dir, "single");
    let out = run(&["construct", s(&p), "--field", "1", "--seed", "0", "--budget", "1"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["r"], 1);
    assert_eq!(v["M"], serde_json::json!([["1"]]));
}

#[test]
fn construct_refuses_zero_rate() {
    let dir = TempDir::new().unwrap();
    let p = fixture(&dir, "example2");
    let out = run(&["construct", s(&p), "--field", "8", "--seed", "0", "--budget", "4"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("rate is 0"));
    assert!(out.stdout.is_empty());
}

#[test]
fn oracle_on_toy() {
    let dir = TempDir::new().unwrap();
    let toy = fixture(&dir, "toy");
    let out = run(&["oracle", s(&toy), "--rmax", "2", "--json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "feasible");
    assert_eq!(v["code"]["r"], 2);
    assert_eq!(code(&run(&["oracle", s(&toy), "--rmax", "1"])), 2);
    assert_eq!(code(&run(&["oracle", s(&toy), "--rmax", "9"])), 1);
}

#[test]
fn reproduce_exit_codes() {
    for id in ["toy", "example2", "example3"] {
        let out = run(&["reproduce", id]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    }
    let out = run(&["reproduce", "example4", "--json"]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let diffs: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["matches"] == false).collect();
    assert_eq!(diffs.len(), 1);
    assert_eq!(diffs[0]["field"], "rho(N_5)");
    assert_eq!(code(&run(&["reproduce", "example7"])), 1);
}
