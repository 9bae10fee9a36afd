use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn t2() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/t2.mvrp")
}

fn mvrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvrp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_t2_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let traces = dir.path().join("traces");
    let o = mvrp(&["solve", s(&t2()), "-o", s(&a), "--trace-dir", s(&traces), "--seed", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("objective 21.0\n"));
    assert!(traces.join("trace-start-0.csv").exists());
    let o = mvrp(&["solve", s(&t2()), "-o", s(&b), "--seed", "3"]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let o = mvrp(&["validate", s(&t2()), s(&a)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok cost 21.0\n");
}

#[test]
fn validate_reports_cost_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("t2.json");
    assert!(mvrp(&["solve", s(&t2()), "-o", s(&sol), "--starts", "2"]).status.success());
    let text = std::fs::read_to_string(&sol).unwrap().replace("\"21.0\"", "\"20.0\"");
    std::fs::write(&sol, text).unwrap();
    let o = mvrp(&["validate", s(&t2()), s(&sol)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("CostMismatch"));
}

#[test]
fn malformed_instance_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mvrp");
    std::fs::write(&bad, "NAME : x\nDIMENSION : two\n").unwrap();
    let o = mvrp(&["solve", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let o = mvrp(&["validate", s(&t2()), s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn brute_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let o = mvrp(&["brute", s(&t2())]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "objective 21.0\nvrp 22.0\nbounds (19.8, 22.0]\n");
    let lp = dir.path().join("t2.lp");
    let o = mvrp(&["export-lp", s(&t2()), "-o", s(&lp)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("variables 44 (x:14 y:14 u:4 w:4 d:8)"));
    assert!(std::fs::read_to_string(&lp).unwrap().contains("Subject To"));
}

#[test]
fn generate_derive_solve() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("base.vrp");
    let derived = dir.path().join("d.mvrp");
    assert!(mvrp(&["generate", "augerat-a", "-o", s(&base), "--nodes", "14", "--seed", "2"]).status.success());
    let o = mvrp(&["derive", s(&base), "-o", s(&derived), "--keep-random", "9", "--seed", "1", "--capacity", "100", "--name", "d10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("d10 nodes 10 "));
    let o = mvrp(&["derive", s(&base), "-o", s(&derived), "--keep-random", "99"]);
    assert_eq!(o.status.code(), Some(2));

    assert!(mvrp(&["derive", s(&base), "-o", s(&derived), "--keep-random", "9", "--seed", "1", "--capacity", "100"]).status.success());
    let sol = dir.path().join("d.json");
    let o = mvrp(&["solve", s(&derived), "-o", s(&sol), "--starts", "2", "--iterations", "100"]);
    assert!(o.status.success());
    assert_eq!(mvrp(&["validate", s(&derived), s(&sol)]).status.code(), Some(0));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("set");
    std::fs::create_dir(&inst).unwrap();
    std::fs::copy(t2(), inst.join("t2.mvrp")).unwrap();
    let csv = dir.path().join("bench.csv");
    let o = mvrp(&["bench", s(&inst), "--csv", s(&csv), "--starts", "2", "--iterations", "50", "--ablate", "shaking"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "{text}");
    assert!(lines[0].starts_with("instance,"));
    assert!(lines[1].contains(",full,21.0,"));
    assert!(lines[2].contains(",no-shaking,21.0,"));
}
