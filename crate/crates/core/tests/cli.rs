use std::path::Path;
use std::process::Command;

use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_quadlie");

/// A single nilpotent chain of length 3 on the antidiagonal form.
fn n23() -> Value {
    json!({
        "field": "Q",
        "gram": [["0","0","1"],["0","1","0"],["1","0","0"]],
        "delta": [["0","1","0"],["0","0","-1"],["0","0","0"]]
    })
}

fn rotation() -> Value {
    json!({ "field": "Q", "gram": [["1","0"],["0","1"]], "delta": [["0","1"],["-1","0"]] })
}

fn run(args: &[&str], input: Option<&Value>, dir: &Path) -> (i32, Value) {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    if let Some(v) = input {
        let p = dir.join("in.json");
        std::fs::write(&p, v.to_string()).unwrap();
        cmd.arg("--in").arg(&p);
    }
    let out = cmd.output().unwrap();
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc)
}

#[test]
fn construct_reports_the_extension() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = run(&["construct"], Some(&rotation()), dir.path());
    assert_eq!(code, 0);
    assert_eq!(doc["kind"], "quadratic-lie-algebra");
    assert_eq!(doc["dim"], 4);
    assert_eq!(doc["version"], quadlie::VERSION);
}

#[test]
fn canon_certificates_validate_on_reentry() {
    let dir = tempfile::tempdir().unwrap();
    let (code, cert) = run(&["canon"], Some(&n23()), dir.path());
    assert_eq!(code, 0);
    assert_eq!(cert["kind"], "canonical-pair");

    let mut input = n23();
    input["certificate"] = cert.clone();
    let (code, doc) = run(&["canon"], Some(&input), dir.path());
    assert_eq!(code, 0);
    assert_eq!(doc["valid"], true);

    input["delta"] = json!([["0","2","0"],["0","0","-2"],["0","0","0"]]);
    let (code, doc) = run(&["canon"], Some(&input), dir.path());
    assert_eq!(code, 1);
    assert_eq!(doc["valid"], false);
}

#[test]
fn census_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let status = Command::new(BIN)
            .args(["census", "--field", "Fp:3", "--dim", "2", "--out"])
            .arg(p)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn seeded_construction_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["construct", "--field", "Fp:5", "--dim", "4", "--seed", "17"];
    let (c1, d1) = run(&args, None, dir.path());
    let (c2, d2) = run(&args, None, dir.path());
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(d1, d2);
}

#[test]
fn exit_codes_separate_bad_input_from_capability_limits() {
    let dir = tempfile::tempdir().unwrap();
    let bad = json!({ "field": "Q", "gram": [["1","0"],["0","1"]], "delta": [["1","0"],["0","0"]] });
    let (code, doc) = run(&["analyze"], Some(&bad), dir.path());
    assert_eq!(code, 1);
    assert_eq!(doc["kind"], "error");

    let (code, doc) = run(&["census", "--field", "Fp:11", "--dim", "4"], None, dir.path());
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "capability");

    let (code, _) = run(&["classify-nilpotent"], Some(&rotation()), dir.path());
    assert_eq!(code, 1);
}

#[test]
fn iso_decides_scaled_copies() {
    let dir = tempfile::tempdir().unwrap();
    let mut right = rotation();
    right["delta"] = json!([["0","3"],["-3","0"]]);
    let input = json!({ "field": "Q", "left": rotation(), "right": right });
    let (code, doc) = run(&["iso"], Some(&input), dir.path());
    assert_eq!(code, 0);
    assert_eq!(doc["kind"], "iso-decision");
    let text = doc.to_string();
    assert!(text.contains("yes") || text.contains("Yes"), "{text}");
}

#[test]
fn lorentz_keys_normalize_frequencies() {
    let dir = tempfile::tempdir().unwrap();
    let input = json!({ "field": "Q", "lam": ["3", "6"], "compare": { "lam": ["2", "1"] } });
    let (code, doc) = run(&["lorentz"], Some(&input), dir.path());
    assert_eq!(code, 0);
    assert_eq!(doc["same_tuple"], true);
}
