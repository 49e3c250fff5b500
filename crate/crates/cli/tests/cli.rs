use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lapctrl"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(stdout(out).trim()).unwrap()
}

fn gen(args: &[&str]) -> String {
    let out = run(args, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

#[test]
fn gen_families() {
    assert_eq!(gen(&["gen", "path", "--k", "1"]).trim(), r#"{"n":1,"edges":[]}"#);
    let ar = json(&run(&["gen", "antiregular", "--k", "5"], None));
    assert_eq!(ar["n"], 5);
    assert_eq!(ar["edges"].as_array().unwrap().len(), 6);
    let k4 = json(&run(&["gen", "complete", "--k", "4"], None));
    assert_eq!(k4["edges"].as_array().unwrap().len(), 6);
    let t = json(&run(&["gen", "threshold", "--creation", "UJUJ"], None));
    assert_eq!(t["n"], 5);
}

#[test]
fn gen_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p4.json");
    let out = run(&["gen", "path", "--k", "4", "-o", path.to_str().unwrap()], None);
    assert!(out.status.success());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn check_path_midpoint_has_witness() {
    let p3 = gen(&["gen", "path", "--k", "3"]);
    let v = json(&run(&["check", "--input", "2", "-"], Some(&p3)));
    assert_eq!(v["controllable"], false);
    assert_eq!(v["rank"], 2);
    let w: Vec<f64> = v["witness"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((w[0] - h).abs() < 1e-9 && w[1].abs() < 1e-9 && (w[2] + h).abs() < 1e-9);

    let end = json(&run(&["check", "--input", "1", "-"], Some(&p3)));
    assert_eq!(end["controllable"], true);
    assert_eq!(end["rank"], 3);
}

#[test]
fn check_all_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ar6.json");
    std::fs::write(&path, gen(&["gen", "antiregular", "--k", "6"])).unwrap();
    for (input, expect) in [("1", false), ("3", true)] {
        let out = run(&["check", "--input", input, "--method", "all", path.to_str().unwrap()], None);
        assert!(out.status.success());
        let v = json(&out);
        assert_eq!(v["agreement"], true);
        assert_eq!(v["controllable"], expect);
        assert_eq!(v["verdicts"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn expect_flag_sets_exit_code() {
    let k4 = gen(&["gen", "complete", "--k", "4"]);
    let ok = run(&["check", "--input", "1", "--expect", "uncontrollable", "-"], Some(&k4));
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["check", "--input", "1", "--expect", "controllable", "-"], Some(&k4));
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"], None).status.code(), Some(2));
    assert_eq!(run(&["gen", "path"], None).status.code(), Some(2));
    let p3 = gen(&["gen", "path", "--k", "3"]);
    assert_eq!(run(&["check", "--input", "9", "-"], Some(&p3)).status.code(), Some(2));
    assert_eq!(run(&["check", "--input", "1", "-"], Some("not json")).status.code(), Some(2));
}

#[test]
fn verify_cj_reports_every_case() {
    let out = run(&["verify", "cj"], None);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 211);
    let summary: Value = serde_json::from_str(lines[210]).unwrap();
    assert_eq!(summary["cases"], 210);
    assert_eq!(summary["failed"], 0);
}

#[test]
fn export_round_trip() {
    let ar = gen(&["gen", "antiregular", "--k", "4"]);
    let dot = run(&["export", "--format", "dot", "-"], Some(&ar));
    assert_eq!(stdout(&dot).trim(), "graph { 1 -- 2; 1 -- 3; 1 -- 4; 2 -- 3; }");
    let back = run(&["export", "--json", "-"], Some(&ar));
    assert_eq!(json(&back), serde_json::from_str::<Value>(&ar).unwrap());
}

#[test]
fn chain_matches_prediction_on_showcase_chain() {
    let out = run(
        &["chain", "--c", "5", "--k2", "5", "--links", "DTTD", "--tail", "4", "--tail-attach", "3", "--input", "4,5"],
        None,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["predicted"], true);
    assert_eq!(v["exact"]["controllable"], true);
}

#[test]
fn random_verification_is_deterministic() {
    let args = ["verify", "majorization", "--random", "20", "--maxk", "8", "--seed", "7"];
    let a = run(&args, None);
    let b = run(&args, None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
