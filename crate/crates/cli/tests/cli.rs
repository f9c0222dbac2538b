use std::process::{Command, Output};

use cartdiff::laws::{LawReport, Status};

fn cartdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartdiff"))
        .args(args)
        .env_remove("CARTDIFF_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn run_ok(args: &[&str]) -> String {
    let out = cartdiff(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out).trim_end().to_string()
}

fn reports(text: &str) -> Vec<LawReport> {
    text.lines().map(|l| LawReport::parse(l).unwrap()).collect()
}

#[test]
fn expression_commands() {
    assert_eq!(run_ok(&["diff", "x^3+x"]), "3*x^2*y + y");
    assert_eq!(run_ok(&["diff", "0"]), "0");
    assert_eq!(run_ok(&["lin", "x^2*y+3*x+z+1"]), "3*x + z");
    assert_eq!(run_ok(&["lin", "x"]), "x");
    assert_eq!(run_ok(&["plin", "--ctx", "z", "z^3*x+z^2*x^3+x+1"]), "z^3*x + x");
    assert_eq!(
        run_ok(&["diff", "--model", "smooth", "exp(x)*cos(y)"]),
        "exp(x)*cos(y)*z - exp(x)*sin(y)*w"
    );
    assert_eq!(run_ok(&["lin", "--model", "smooth", "exp(x)*cos(y)"]), "x");
    assert_eq!(run_ok(&["diff", "--model", "biproduct", "[[1,2],[3,4]]"]), "[[0,0,1,2],[0,0,3,4]]");
    assert_eq!(run_ok(&["tower", "--depth", "1", "x^2"]), "D^0: x^2\nD^1: 2*x*y");
}

#[test]
fn closed_terms() {
    assert_eq!(run_ok(&["closed", "--def", "f=x^3+x", "D(f)", "--at", "2,1"]), "13");
    assert_eq!(run_ok(&["closed", "--def", "f=x^3+x", "L(f)", "--at", "-3"]), "-3");
    let out = cartdiff(&["closed", "D(g)", "--at", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demos() {
    let text = run_ok(&["demo", "interchange"]);
    assert!(text.contains("L1[f]     = x*y + 4*y"), "{text}");
    assert!(text.contains("L1[L0[f]] = x*y\n"), "{text}");
    assert!(text.contains("L0[L1[f]] = x*y\n"), "{text}");
    assert!(run_ok(&["demo", "c1"]).contains("|x|^(3/2)"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    for args in [
        &["diff", "x^"][..],
        &["plin", "--ctx", "z", "sin(x)"],
        &["laws", "--model", "nope"],
        &["laws", "--suite", "nope"],
        &["laws", "--suite", "closed"],
        &["laws", "--mutant", "nope"],
        &["laws", "--tol", "1e-3"],
        &["demo", "nope"],
    ] {
        let out = cartdiff(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let err = String::from_utf8(cartdiff(&["diff", "x^"]).stderr).unwrap();
    assert!(err.contains('^'), "{err}");
}

#[test]
fn poly_suite_passes() {
    let out = cartdiff(&["laws", "--model", "poly", "--suite", "all", "--seed", "42", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("model=poly suite=all seed=42 budget=100\n"));
    assert!(text.contains("laws pass"));
}

#[test]
fn mutant_fails_cd3() {
    let out = cartdiff(&[
        "laws", "--model", "poly", "--mutant", "cd3-zero", "--budget", "50", "--format", "structured",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let rs = reports(&stdout(&out));
    let cd3 = rs.iter().find(|r| r.law == "CD.3").unwrap();
    assert_eq!(cd3.status, Status::Fail);
    assert!(cd3.case.is_some() && cd3.counterexample.is_some());
}

#[test]
fn structured_output_is_deterministic_and_ordered() {
    let args = ["laws", "--model", "smooth", "--suite", "l", "--budget", "20", "--format", "structured"];
    let a = cartdiff(&args);
    let b = cartdiff(&args);
    assert_eq!(a.stdout, b.stdout);
    let rs = reports(&stdout(&a));
    assert!(rs.iter().all(|r| r.seed == 42));
    assert!(rs.windows(2).all(|w| w[0].law <= w[1].law));

    let closed = ["laws", "--model", "closed", "--suite", "closed", "--budget", "3", "--points", "5", "--format", "structured"];
    assert_eq!(cartdiff(&closed).stdout, cartdiff(&closed).stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cartdiff"))
        .args(["laws", "--suite", "cd", "--budget", "5", "--format", "structured"])
        .env("CARTDIFF_SEED", "7")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(reports(&stdout(&out)).iter().all(|r| r.seed == 7));
    let flag = Command::new(env!("CARGO_BIN_EXE_cartdiff"))
        .args(["laws", "--suite", "cd", "--budget", "5", "--format", "structured", "--seed", "9"])
        .env("CARTDIFF_SEED", "7")
        .output()
        .unwrap();
    assert!(reports(&stdout(&flag)).iter().all(|r| r.seed == 9));
}
