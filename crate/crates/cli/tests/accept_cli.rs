use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn krho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krho")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const P5_DIRECTED: &str = "krho-graph v1\ndirected\n5 4\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n";
const P5_UNDIRECTED: &str = "krho-graph v1\nundirected\n5 4\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n";

#[test]
fn verify_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p5.txt", P5_DIRECTED);
    let good = write(dir.path(), "good.txt", "krho-shortcuts v1\n0 2 2\n1 3 2\n");
    let bad = write(dir.path(), "bad.txt", "krho-shortcuts v1\n0 2 2\n");

    let out = krho(&["verify", "-k", "2", "-r", "3", &g, "--shortcuts", &good]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["verification"]["valid"], true);
    assert!(report.get("timing_ms").is_none());

    let out = krho(&["verify", "-k", "2", "-r", "3", &g, "--shortcuts", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verification"]["remaining_deficient"], serde_json::json!([1]));

    let out = krho(&["verify", "-k", "2", "-r", "3", &g, "--shortcuts", &good, "--budget", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_rejects_distance_changing_shortcut() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p5.txt", P5_DIRECTED);
    let s = write(dir.path(), "s.txt", "krho-shortcuts v1\n0 2 1\n1 3 2\n");
    let out = krho(&["verify", "-k", "2", "-r", "3", &g, "--shortcuts", &s]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!json(&out)["verification"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn deficient_lists_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p5.txt", P5_DIRECTED);
    let out = krho(&["deficient", "-k", "2", "-r", "3", &g]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["deficient"]["vertices"], serde_json::json!([0, 1]));
    assert_eq!(report["deficient"]["certificates"].as_array().unwrap().len(), 2);
}

#[test]
fn solve_algorithms_agree_on_p5() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p5.txt", P5_UNDIRECTED);
    for (algo, size) in [("exact", 1), ("kk1", 1), ("greedy", 1)] {
        let s = dir.path().join(format!("{algo}.txt"));
        let out = krho(&["solve", "-k", "2", "-r", "3", &g, "--algo", algo, "--out", s.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{algo}");
        let report = json(&out);
        assert_eq!(report["solution"]["size"], size, "{algo}");
        assert_eq!(report["verification"]["valid"], true);
        let verified = krho(&["verify", "-k", "2", "-r", "3", &g, "--shortcuts", s.to_str().unwrap()]);
        assert_eq!(verified.status.code(), Some(0));
    }
}

#[test]
fn solve_reports_infeasible_budget() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p5.txt", P5_DIRECTED);
    let out = krho(&["solve", "-k", "2", "-r", "3", &g, "--budget", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = krho(&["solve", "-k", "2", "-r", "3", &g, "--budget", "1"]);
    assert_eq!(json(&out)["solution"]["size"], 1);
    assert_eq!(json(&out)["solution"]["shortcuts"][0]["u"], 1);
}

#[test]
fn solve_rejects_wrong_setting() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p5.txt", P5_DIRECTED);
    assert_eq!(krho(&["solve", "-k", "2", "-r", "3", &g, "--algo", "kk1"]).status.code(), Some(2));
    assert_eq!(krho(&["solve", "-k", "2", "-r", "3", &g, "--algo", "k1"]).status.code(), Some(2));
}

#[test]
fn orientation_override() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p5.txt", P5_DIRECTED);
    let out = krho(&["deficient", "-k", "2", "-r", "3", &g, "--undirected"]);
    let report = json(&out);
    assert_eq!(report["instance"]["directed"], false);
    assert_eq!(report["deficient"]["vertices"], serde_json::json!([0, 4]));
}

#[test]
fn reduce_writes_graph_and_roles() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.txt", "krho-hyper v1\n3 3\n2 0 1\n2 1 2\n2 0 2\n");
    let out_path = dir.path().join("g.txt");
    let out = krho(&["reduce", "thm1", &h, "-k", "2", "-r", "4", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json(&out);
    let starts = summary["path_starts"].as_array().unwrap().clone();
    assert_eq!(starts.len(), 3);

    let roles: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("g.txt.roles.json")).unwrap()).unwrap();
    assert_eq!(roles["k"], 2);
    let g = out_path.to_str().unwrap();
    let out = krho(&["deficient", "-k", "2", "-r", "4", g]);
    assert_eq!(json(&out)["deficient"]["vertices"], Value::Array(starts));

    let out = krho(&["solve", "-k", "2", "-r", "4", g]);
    assert_eq!(json(&out)["solution"]["size"], 2);
    assert_eq!(json(&krho(&["oracle", "hitting", &h]))["size"], 2);
}

#[test]
fn reduce_checks_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.txt", "krho-hyper v1\n4 1\n4 0 1 2 3\n");
    let out = dir.path().join("g.txt");
    let out = krho(&["reduce", "thm1", &h, "-k", "2", "-r", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_hitting_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.txt", "krho-hyper v1\n4 2\n2 0 1\n2 2 3\n");
    assert_eq!(krho(&["oracle", "hitting", &h, "--alpha", "2"]).status.code(), Some(0));
    assert_eq!(krho(&["oracle", "hitting", &h, "--alpha", "1"]).status.code(), Some(1));
}

#[test]
fn format_errors_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bad.txt", "krho-graph v1\ndirected\n2 1\n\n0 1 -3\n");
    let out = krho(&["deficient", "-k", "1", "-r", "2", &g]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5"), "{err}");
    let missing = krho(&["deficient", "-k", "1", "-r", "2", "/nonexistent/graph.txt"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(krho(&["verify", "-k", "1"]).status.code(), Some(2));
}

#[test]
fn generators_are_deterministic() {
    let a = krho(&["gen", "random-graph", "--n", "8", "--seed", "7"]);
    let b = krho(&["gen", "random-graph", "--n", "8", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("krho-graph v1\nundirected\n8 "));
    let h = krho(&["gen", "random-hypergraph", "--n", "5", "--m", "4", "--d", "3", "--seed", "1"]);
    assert!(String::from_utf8_lossy(&h.stdout).starts_with("krho-hyper v1\n5 4\n"));
}

#[test]
fn selftest_quick_prints_one_line_per_criterion() {
    let out = krho(&["selftest", "--quick", "--threads", "2"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let lines = text.lines().filter(|l| l.starts_with("[PASS]") || l.starts_with("[FAIL]")).count();
    assert_eq!(lines, 11, "{text}");
    assert!(matches!(out.status.code(), Some(0 | 1)));
}
