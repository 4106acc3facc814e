//! The `qsverify` binary: exit codes, expansions and JSON reports.

use std::path::Path;
use std::process::{Command, Output};

use qsverify::cli::report::{run_json, strip_timings};
use qsverify::exactalg::{Den, ParamMono, ParamPoly};
use qsverify::registry::{list_identities, ReportMismatch, Status, VerificationReport};
use serde_json::Value;

fn qsverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsverify")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Whole-power coefficients printed by `expand`, from `q^0`.
fn expanded(expr: &str, order: i64) -> Vec<i64> {
    let o = qsverify(&["expand", "--expr", expr, "--order", &order.to_string()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    stdout(&o)
        .lines()
        .skip(1)
        .map(|l| {
            let (e, c) = l.split_once('\t').expect("exp<TAB>coeff");
            assert!(!e.contains('/'), "fractional exponent in {l}");
            c.parse().unwrap()
        })
        .collect()
}

fn schema() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&doc).expect("schema compiles")
}

fn assert_valid(doc: &Value) {
    let schema = schema();
    let msgs: Vec<String> = match schema.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("schema violations: {msgs:?}");
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn list_prints_every_record() {
    let o = qsverify(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for r in list_identities() {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(r.id)), "{} not listed", r.id);
    }
}

#[test]
fn verify_uz1_passes() {
    let o = qsverify(&["verify", "--id", "uz1", "--order", "40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS  uz1 order=40"));
}

#[test]
fn verify_thm11_specialized() {
    let o = qsverify(&["verify", "--id", "thm11", "--order", "30", "--set", "x=q", "--set", "y=q^1/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn verify_family_runs_every_knob_value() {
    let o = qsverify(&["verify", "--id", "gst", "--order", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for m in 0..=5 {
        assert!(text.contains(&format!("PASS  gst m={m} order=10")), "{text}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--id", "nosuch"][..],
        &["verify", "--id", "rr1", "--set", "x=q"],
        &["verify", "--id", "cw1", "--set", "z=q"],
        &["verify", "--id", "cw1", "--set", "x=q^"],
        &["verify", "--id", "gst", "--m", "9"],
        &["verify", "--id", "thm16", "--set", "x=q^-1", "--set", "y=q"],
        &["verify", "--id", "rr1", "--order", "-1"],
        &["verify", "--id", "rr1", "--denominator", "0"],
        &["expand", "--expr", "(q3;q)_inf", "--order", "5"],
        &["expand", "--expr", "(q;q)_inf/2", "--order", "5"],
        &["expand", "--expr", "1/(1;q)_inf", "--order", "5"],
        &["bogus"],
        &[],
    ] {
        let o = qsverify(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
        assert!(!stderr(&o).is_empty(), "{args:?}: no diagnostic");
    }
}

#[test]
fn syntax_error_reports_offset_and_expected_tokens() {
    let o = qsverify(&["expand", "--expr", "(q3;q)_inf", "--order", "5"]);
    let err = stderr(&o);
    assert!(err.contains("offset 2"), "{err}");
    assert!(err.contains('^'), "{err}");
}

#[test]
fn expand_rogers_ramanujan_product() {
    assert_eq!(expanded("1/(q,q^4;q^5)_inf", 9), [1, 1, 1, 1, 2, 2, 3, 3, 4, 5]);
}

#[test]
fn expand_euler_product() {
    assert_eq!(expanded("(q;q)_inf", 7), [1, -1, -1, 0, 0, 1, 0, 1]);
}

#[test]
fn expand_unit_relation() {
    let mut want = vec![0; 21];
    want[0] = 1;
    assert_eq!(expanded("(q,-q,-q^2;q^2)_inf", 20), want);
}

#[test]
fn expand_json_lists_nonzero_coefficients() {
    let o = qsverify(&["expand", "--expr", "(q;q)_inf", "--order", "7", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["expr"], "(q;q)_inf");
    assert_eq!(doc["denominator"], 2);
    let exps: Vec<i64> = doc["coefficients"].as_array().unwrap().iter().map(|c| c[0].as_i64().unwrap()).collect();
    assert_eq!(exps, [0, 2, 4, 10, 14]);
    assert_eq!(doc["coefficients"][1][1], serde_json::json!([[-1, 0, 0, 2]]));
}

#[test]
fn verify_json_validates_and_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let o = qsverify(&["verify", "--id", "cor13", "--order", "12", "--json", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let mut doc = read_json(&path);
        assert_valid(&doc);
        strip_timings(&mut doc);
        docs.push(doc);
    }
    assert_eq!(docs[0], docs[1]);
    assert_eq!(docs[0]["summary"]["pass"], 5);
}

#[test]
fn verify_all_json_follows_catalog_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("all.json");
    let o = qsverify(&["verify-all", "--order", "6", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let doc = read_json(&path);
    assert_valid(&doc);
    let got: Vec<(String, Value)> = doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["id"].as_str().unwrap().to_string(), r["m"].clone()))
        .collect();
    let want: Vec<(String, Value)> = list_identities()
        .iter()
        .flat_map(|r| r.knob_values().into_iter().map(move |m| (r.id.to_string(), serde_json::json!(m))))
        .collect();
    assert_eq!(got, want);
    assert!(!doc["cross_checks"].as_array().unwrap().is_empty());
    assert_eq!(doc["summary"]["fail"], 0);
    assert_eq!(doc["summary"]["error"], 0);
    // text output lists records in the same order
    let text_ids: Vec<String> = stdout(&o)
        .lines()
        .take_while(|l| !l.starts_with("cross-checks"))
        .filter_map(|l| l.split_whitespace().nth(1).map(str::to_string))
        .collect();
    let want_ids: Vec<String> = want.iter().map(|(id, _)| id.clone()).collect();
    assert_eq!(text_ids, want_ids);
}

#[test]
fn failing_report_validates() {
    let d = Den::DEFAULT;
    let poly = |c: i64, x: i64| ParamPoly::from_mono(d, &ParamMono::new(c, x, 0));
    let fail = VerificationReport {
        id: "demo".into(),
        m: Some(1),
        order: 10,
        denominator: 2,
        environment: "x=q".into(),
        status: Status::Fail,
        mismatch: Some(ReportMismatch {
            exponent: 6,
            lhs: poly(3, 2),
            rhs: poly(-123456789, 0),
            route: "lhs/rhs".into(),
        }),
        error: None,
        elapsed_ms: 7,
    };
    let error =
        VerificationReport { status: Status::Error, mismatch: None, error: Some("boom".into()), ..fail.clone() };
    let doc = run_json(d, Some(10), &[fail, error], &[]);
    assert_valid(&doc);
    assert_eq!(doc["reports"][0]["mismatch"]["lhs"], serde_json::json!([[3, 2, 0, 2]]));
    assert_eq!(doc["summary"], serde_json::json!({"pass": 0, "fail": 1, "error": 1}));
}
