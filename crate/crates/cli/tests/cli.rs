use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

const PLAYBOARD: &str = "23,41,40,17\n1,1,0,0,12\n0,0,1,1,8\n1,0,1,0,24\n\
    0,1,0,1,14\n0,1,1,0,-22\n1,0,0,1,-5\n1,0,1,1,-3\n";
const PING_PONG: &str = "A,B,21,16\nC,D,18,21\nA,E,19,21\nB,C,25,27\nD,E,22,20\nA,D,21,18\n";
const IRREGULAR: &str =
    "x1^100 x2^100 x3^100 x4^100 x5 (x1+x2) (x3+x4)^20 / ((x1+x2+x3)^202 (x2+x3+x4)^220)";

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn weaver(args: &[&str], input: &NamedTempFile) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weaver"))
        .args(args)
        .arg(input.path())
        .env("RUST_LOG", "off")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Pulls the number array stored under `key` out of a flat JSON line.
fn array(json: &str, key: &str) -> Vec<f64> {
    let start = json.find(&format!("\"{key}\":[")).unwrap() + key.len() + 4;
    let end = start + json[start..].find(']').unwrap();
    json[start..end]
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().unwrap())
        .collect()
}

#[test]
fn playboard_table_margins() {
    let f = file(PLAYBOARD);
    let o = weaver(&["solve", "--format", "grid", "--out", "table"], &f);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for margin in [
        "87.41", "22.17", "17.44", "44.11", "30.71", "-35.04", "-13.44", "-4.36",
    ] {
        assert!(out.contains(margin), "{margin} missing from\n{out}");
    }
    assert!(out.contains("0.2288") && out.contains("0.1433"));
}

#[test]
fn json_schema_and_determinism() {
    let f = file(PLAYBOARD);
    let args = ["solve", "--format", "grid"];
    let (a, b) = (weaver(&args, &f), weaver(&args, &f));
    assert_eq!(a.stdout, b.stdout);
    let json = stdout(&a);
    let keys = [
        "p",
        "tau0",
        "tau",
        "sse",
        "iterations",
        "solver",
        "status",
        "regularity",
    ];
    for k in keys {
        assert!(json.contains(&format!("\"{k}\":")), "{k}");
    }
    assert!(!json.contains("ms"));
    let stderr = String::from_utf8(a.stderr).unwrap();
    assert!(stderr.contains("sha256"));
}

#[test]
fn multinomial_expression() {
    let f = file("x1^3*x2^7");
    let o = weaver(&["solve"], &f);
    assert_eq!(o.status.code(), Some(0));
    let json = stdout(&o);
    let p = array(&json, "p");
    assert!((p[0] - 0.3).abs() < 1e-15 && (p[1] - 0.7).abs() < 1e-15);
    assert!(json.contains("\"iterations\":1,"));
}

#[test]
fn every_engine_on_matches() {
    let f = file(PING_PONG);
    for engine in ["alliance", "weaver", "greedy", "mm", "newton"] {
        let o = weaver(&["solve", "--format", "matches", "--solver", engine], &f);
        assert_eq!(o.status.code(), Some(0), "{engine}");
        let p = array(&stdout(&o), "p");
        assert_eq!(p.len(), 5);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn csv_output() {
    let f = file(PLAYBOARD);
    let out = stdout(&weaver(&["solve", "--format", "grid", "--out", "csv"], &f));
    assert!(out.starts_with("field,label,value\n"));
    assert!(out.contains("tau,1011,"));
    assert!(out.contains("status,,converged"));
}

#[test]
fn iteration_cap_exit() {
    let f = file(PLAYBOARD);
    let o = weaver(
        &[
            "solve",
            "--format",
            "grid",
            "--solver",
            "weaver",
            "--max-iter",
            "3",
        ],
        &f,
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("iteration_cap"));
}

#[test]
fn input_errors_exit_one() {
    let f = file("x1 + x2");
    assert_eq!(weaver(&["solve"], &f).status.code(), Some(1));
    let f = file("1,2\n1,1,x\n");
    assert_eq!(
        weaver(&["solve", "--format", "grid"], &f).status.code(),
        Some(1)
    );
}

#[test]
fn check_verdicts() {
    let f = file(PLAYBOARD);
    assert_eq!(
        weaver(&["check", "--format", "grid"], &f).status.code(),
        Some(0)
    );
    let f = file(IRREGULAR);
    let o = weaver(&["check"], &f);
    assert_eq!(o.status.code(), Some(4));
    let out = stdout(&o);
    assert!(
        out.contains("irregular") && out.contains("11110 sum -1"),
        "{out}"
    );
    let f = file("x1^2 x2^5");
    assert_eq!(weaver(&["check"], &f).status.code(), Some(0));
}

#[test]
fn check_size_cap_from_env() {
    let f = file(IRREGULAR);
    let o = Command::new(env!("CARGO_BIN_EXE_weaver"))
        .args(["check"])
        .arg(f.path())
        .env("WEAVER_MAX_REG_N", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn reconstruct_audit() {
    let f = file(PLAYBOARD);
    let o = weaver(
        &[
            "reconstruct",
            "--format",
            "grid",
            "--at",
            "0.228788,0.312595,0.315337,0.143280",
        ],
        &f,
    );
    assert_eq!(o.status.code(), Some(0));
    let json = stdout(&o);
    let tau = array(&json, "tau");
    let want = [22.17, 17.44, 44.11, 30.71, -35.04, -13.44, -4.36];
    for (t, w) in tau.iter().zip(want) {
        assert!((t - w).abs() < 0.02, "{t} vs {w}");
    }

    let f = file("x1^3 x2^7");
    let json = stdout(&weaver(&["reconstruct", "--at", "0.3,0.7"], &f));
    assert!(array(&json, "deviation").iter().all(|d| d.abs() < 1e-12));

    let f = file("x1^3 x2^7");
    let o = weaver(&["reconstruct", "--at", "0.5,0.6"], &f);
    assert_eq!(o.status.code(), Some(1));
}
