use std::process::Command;

use discmono::monodromy::{FactoredZeta, MonodromyClass, RotationNumber};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_discmono"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out) = run(&all);
    let v: Value = serde_json::from_str(&out).expect("valid JSON");
    assert_eq!(v["schema"], "1");
    (code, v)
}

#[test]
fn documented_examples() {
    assert_eq!(run(&["zeta", "A2"]), (0, "(1-T^6)/((1-T^2)(1-T^3))\n".to_string()));
    assert_eq!(run(&["zeta", "B2"]), (0, "(1-T^4)/(1-T^2)\n".to_string()));
    assert_eq!(run(&["chambers", "B2"]), (0, "8\n".to_string()));
    let (code, out) = run(&["verify-finite", "A1", "-p", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("4/4 characters pass"));
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["degrees", "E8"], 0),
        (&["check", "F4", "--identity", "otherform"], 0),
        (&["check", "B3", "--identity", "ab2", "--chi", "2/7"], 0),
        (&["check", "H3", "--identity", "compl"], 0),
        (&["euler", "A3"], 0),
        (&["molien", "D4"], 0),
        (&["integral", "A2", "-s", "1"], 0),
        (&["max", "B2", "--restarts", "10", "--seed", "3"], 0),
        (&["verify-finite", "B2", "-p", "7", "--chi", "3"], 0),
        (&["verify-finite", "A2", "-p", "3"], 2),
        (&["verify-finite", "A1", "-p", "9"], 2),
        (&["verify-finite", "A1", "-p", "5", "--chi", "4"], 2),
        (&["charsum", "H3", "-p", "7"], 2),
        (&["integral", "B3", "-s", "1"], 2),
        (&["zeta", "Q7"], 2),
        (&["zeta", "0-1:2"], 2),
        (&["class", "A1xA2", "--at", "0"], 2),
        (&["check", "A2", "--identity", "nonsense"], 2),
        (&["frobnicate"], 2),
        (&[], 2),
    ];
    for (args, expected) in cases {
        assert_eq!(run(args).0, *expected, "{args:?}");
    }
}

#[test]
fn zeta_json_round_trips() {
    for d in ["A2", "B2", "A3", "H3", "I2(7)", "0-1:5,1-2"] {
        let (_, text) = run(&["zeta", d]);
        let (code, v) = run_json(&["zeta", d]);
        assert_eq!(code, 0);
        let z: FactoredZeta = serde_json::from_value(v["zeta"].clone()).unwrap();
        assert_eq!(format!("{z}\n"), text, "{d}");
    }
}

#[test]
fn class_json_round_trips() {
    for args in [
        vec!["class", "A3"],
        vec!["class", "B3", "--at", "inf"],
        vec!["class", "D4", "--which", "qN"],
        vec!["class", "G2", "--at", "0"],
    ] {
        let (_, text) = run(&args);
        let (_, v) = run_json(&args);
        let class = MonodromyClass::from_terms(v["class"].as_array().unwrap().iter().map(|t| {
            let r: RotationNumber = t["rotation"].as_str().unwrap().parse().unwrap();
            (r, t["multiplicity"].as_i64().unwrap())
        }));
        let z: FactoredZeta = serde_json::from_value(v["zeta"].clone()).unwrap();
        let rendered = format!("{}: {class}\nzeta: {z}\n", v["label"].as_str().unwrap());
        assert_eq!(rendered, text, "{args:?}");
    }
}

#[test]
fn verify_finite_json_fields() {
    let (code, v) = run_json(&["verify-finite", "B2", "-p", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["type"], "B2");
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["pass"], true);
        assert!(row["abs_diff"].as_f64().unwrap() < 1e-9);
    }
    let (code, v) = run(&["verify-finite", "A1", "-p", "5", "--json"]);
    assert_eq!(code, 0);
    assert!(v.contains("\"schema\": \"1\""));
}

#[test]
fn errors_in_json_mode_still_carry_schema() {
    let (code, v) = run_json(&["kappa", "Z9"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("Z9"));
}
