//! End-to-end runs of the command line, in process and through the binary.

use quatval_cli::{execute, Execution};
use serde_json::Value;

fn run(args: &[&str]) -> Execution {
    execute(std::iter::once("quatval").chain(args.iter().copied()))
}

fn run_json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn sum_of_two_squares_at_a_rational_place_is_present() {
    let r = run_json(&["analyze", "--field", "Q(t)", "--val", "Q(t):place=t", "--a", "-1", "--b", "-1"]);
    assert_eq!(r["verdict"], "PRESENT");
    assert_eq!(r["verdict_kind"], "unramified_extension");
    assert_eq!(r["case"], "case3_units");
    assert_eq!(r["value_group"], "Z");
    assert_eq!(r["residue_field"]["variant"], "conic");
    assert_eq!(r["residue_field"]["relation"], "S^2 = -T^2 - 1");
    assert_eq!(r["family"].as_array().unwrap().len(), 0);
}

#[test]
fn padic_fixtures() {
    // 2 and 3 are units at 5 and 2x² + 3 = y² has the residue point (2, 1)
    let r = run_json(&["analyze", "--field", "Q", "--val", "Q:p=5", "--a", "2", "--b", "3"]);
    assert_eq!(r["verdict"], "ABSENT");
    assert_eq!(r["verdict_kind"], "no_extension_split_residue");
    let family = r["family"].as_array().unwrap();
    assert_eq!(family.len(), 3);
    let pivots: Vec<&str> = family.iter().map(|m| m["pivot_in_f"].as_str().unwrap()).collect();
    assert_eq!(pivots, ["1/5*x - 2/5", "1/25*x - 2/25", "1/125*x - 2/125"]);

    // 2 is a nonsquare mod 5, so (5, 2) only has ramified extensions
    let r = run_json(&["analyze", "--field", "Q", "--val", "Q:p=5", "--a", "5", "--b", "2", "--count", "2"]);
    assert_eq!(r["verdict_kind"], "ramified_only");
    assert_eq!(r["case"], "case2_b");
    assert_eq!(r["value_group"], "(1/2)Z");
    assert_eq!(r["residue_field"]["variant"], "rational");
    assert_eq!(r["family"].as_array().unwrap().len(), 2);

    // 4 = 2² at 5: the odd-unit shape with a square residue
    let r = run_json(&["quat", "decide", "--field", "Q", "--val", "Q:p=5", "--a", "5", "--b", "4"]);
    assert_ne!(r["kind"], "unramified_extension");
}

#[test]
fn eval_and_gauss() {
    let conic = ["--field", "Q", "--val", "Q:p=5", "--a", "5", "--b", "2"];
    let eval = |f: &str, g: &str| {
        let mut args = vec!["eval"];
        args.extend_from_slice(&conic);
        args.extend_from_slice(&["--f", f, "--g", g]);
        run_json(&args)
    };
    // s² = 5x² + 2 forces w(x) = −1/2 and w(s) = 0
    assert_eq!(eval("x", "0")["value"], "-1/2");
    assert_eq!(eval("0", "1")["value"], "0");
    assert!(eval("0", "1")["residue"].is_string());
    assert_eq!(eval("25*x^3", "0")["value"], "1/2");
    assert_eq!(eval("x", "0")["residue"], Value::Null);

    let r = run_json(&["gauss", "--val", "Q:p=5", "--pivot", "x/5", "--eval", "x^2/25 + 1"]);
    assert_eq!(r["value"], "0");
    assert_eq!(r["residue"], "Y^2 + 1");
    let r = run_json(&["gauss", "--val", "Q:p=3", "--eval", "9*x^2 + 3"]);
    assert_eq!(r["value"], "1");
}

#[test]
fn hilbert_symbols() {
    // classical values: −1 is a sum of two squares only locally away from 2 and ∞
    for (a, b, place, s) in [
        ("-1", "-1", "inf", -1),
        ("-1", "-1", "2", -1),
        ("-1", "-1", "3", 1),
        ("2", "5", "5", -1),
        ("3", "5", "5", -1),
        ("4", "5", "5", 1),
        ("-1", "5", "5", 1),
        ("1/3", "5", "3", -1),
        ("1/3", "7", "3", 1),
    ] {
        let out = run(&["hilbert", "--a", a, "--b", b, "--place", place]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(out.stdout.trim(), s.to_string(), "({a}, {b})_{place}");
    }
    assert_eq!(run(&["hilbert", "--a", "2", "--b", "3", "--place", "4"]).code, 2);
}

#[test]
fn quaternion_splitting() {
    let r = run_json(&["quat", "split", "--field", "Q", "--a", "-1", "--b", "-1"]);
    assert_eq!(r["split"], false);
    assert_eq!(r["ramified_places"], serde_json::json!(["2", "inf"]));
    let r = run_json(&["quat", "split", "--field", "Q", "--a", "2", "--b", "7"]);
    assert_eq!(r["split"], true);
    let p: Vec<&str> = r["certificate"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(p.len(), 3);
    let r = run_json(&["quat", "split", "--field", "GF(3)[w]/(w^2+1)", "--a", "w", "--b", "w+1"]);
    assert_eq!(r["split"], true);
    // splitting over Q(t) is only decided with a trivial certificate
    assert_eq!(run(&["quat", "split", "--field", "Q(t)", "--a", "t", "--b", "-1"]).code, 1);
    assert_eq!(run_json(&["quat", "split", "--field", "Q(t)", "--a", "t^2", "--b", "-1"])["split"], true);
}

#[test]
fn function_field_verdicts() {
    let r =
        run_json(&["quat", "decide", "--field", "Fq(t):q=3", "--val", "Fq(t):q=3,place=t^2+1", "--a", "t", "--b", "2"]);
    assert_eq!(r["kind"], "no_extension_split_residue");
    let r = run_json(&["analyze", "--field", "Fq(t):q=5", "--val", "Fq(t):q=5,place=t", "--a", "t", "--b", "2"]);
    assert_eq!(r["verdict_kind"], "ramified_only");
    let r = run_json(&[
        "family",
        "--field",
        "Fq(t):q=5",
        "--val",
        "Fq(t):q=5,place=t",
        "--a",
        "t",
        "--b",
        "2",
        "--count",
        "4",
    ]);
    assert_eq!(r["members"].as_array().unwrap().len(), 4);
    // an unramified extension leaves no family to build
    let out = run(&["family", "--field", "Q(t)", "--val", "Q(t):place=t", "--a", "-1", "--b", "-1"]);
    assert_eq!(out.code, 1);
}

#[test]
fn polynomial_representation() {
    let r = run_json(&["polyrep", "--field", "GF(5)", "--y", "(x^3+1)/(x-2)"]);
    assert_eq!((r["degree"].as_u64(), r["integral"].as_bool()), (Some(3), Some(true)));
    let r = run_json(&["polyrep", "--field", "Q", "--y", "(x^2+1)/x^3"]);
    assert_eq!((r["degree"].as_u64(), r["integral"].as_bool()), (Some(3), Some(false)));
    assert_eq!(r["minimal_polynomial"], "T^2 + 1 - Y*(T^3)");
    assert_eq!(run(&["polyrep", "--field", "Q", "--y", "7"]).code, 1);
}

#[test]
fn exit_codes() {
    let dyadic = run(&["analyze", "--field", "Q", "--val", "Q:p=2", "--a", "5", "--b", "2"]);
    assert_eq!(dyadic.code, 2);
    assert!(dyadic.stderr.contains("standing hypothesis v(2) = 0"), "{}", dyadic.stderr);
    assert_eq!(run(&["quat", "split", "--field", "Fq(t):q=0", "--a", "1", "--b", "1"]).code, 2);
    assert_eq!(run(&["analyze", "--field", "Fq(t):q=4", "--val", "Fq(t):q=4,place=t", "--a", "1", "--b", "t"]).code, 2);

    let zero = run(&["analyze", "--field", "Q", "--val", "Q:p=5", "--a", "0", "--b", "2"]);
    assert_eq!(zero.code, 1);
    assert!(zero.stderr.contains("nonzero"));
    assert_eq!(run(&["eval", "--field", "Q", "--val", "Q:p=5", "--a", "5", "--b", "2", "--f", "0"]).code, 1);
    assert_eq!(run(&["hilbert", "--a", "1/0", "--b", "1", "--place", "3"]).code, 1);

    let syntax = run(&["hilbert", "--a", "2 +", "--b", "1", "--place", "3"]);
    assert_eq!(syntax.code, 2);
    assert!(syntax.stderr.contains("offset 3"), "{}", syntax.stderr);
    assert_eq!(run(&["hilbert", "--a", "t", "--b", "1", "--place", "3"]).code, 2);
    assert_eq!(run(&["analyze", "--field", "Q(s)", "--val", "Q(t):place=t", "--a", "1", "--b", "t"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["analyze", "--field", "Q"]).code, 2);

    let corrupted = run(&["verify", "--suite", "corrupted", "--samples", "60"]);
    assert_eq!(corrupted.code, 3);
    let report: Value = serde_json::from_str(&corrupted.stdout).unwrap();
    assert_eq!(report["agreement"], false);
    assert!(report["reports"].as_array().unwrap().iter().all(|r| r["counterexample"].is_string()));
}

#[test]
fn verify_suites_agree_and_are_reproducible() {
    for suite in ["base", "gauss", "w-star"] {
        let out = run(&["verify", "--suite", suite, "--samples", "60", "--seed", "9"]);
        assert_eq!(out.code, 0, "{suite}: {}", out.stdout);
        assert_eq!(out, run(&["verify", "--suite", suite, "--samples", "60", "--seed", "9"]));
    }
}

#[test]
fn text_output() {
    let out = run(&["analyze", "--field", "Q", "--val", "Q:p=5", "--a", "2", "--b", "3", "--search-bound", "20"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("verdict: ABSENT"));
    assert!(out.stdout.contains("residue field: F_5(T)(S), S^2 = 2*T^2 + 3"));
    let out = run(&["analyze", "--field", "Q", "--val", "Q:p=5", "--a", "50", "--b", "3"]);
    assert!(out.stdout.contains("T = res((5) * x), S = res(s)"), "{}", out.stdout);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_quatval");
    let out =
        std::process::Command::new(bin).args(["hilbert", "--a", "-1", "--b", "-1", "--place", "inf"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "-1");
    let out = std::process::Command::new(bin)
        .args(["analyze", "--field", "Q", "--val", "Q:p=2", "--a", "1", "--b", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out =
        std::process::Command::new(bin).args(["verify", "--suite", "corrupted", "--samples", "30"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
