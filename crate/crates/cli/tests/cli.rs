use std::process::{Command, Output};

use serde_json::Value;

fn slicereg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicereg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn eval_prints_a_quaternion_array() {
    let out = slicereg(&["eval", "--fn", "f2", "--x", "k"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "[0,0.5,0,0.5]");
    let v = json(&slicereg(&["eval", "--fn", "x2", "--x", "1,2,0,0"]));
    assert_eq!(v, serde_json::json!([-3, 4, 0, 0]));
}

#[test]
fn wings_of_f6_are_zero_and_j() {
    let out = slicereg(&["wings", "--fn", "f6"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        r#"{"kind":"Two","values":[[0,0,0,0],[0,0,1,0]]}"#
    );
}

#[test]
fn classify_reports_the_triple() {
    let v = json(&slicereg(&["classify", "--fn", "x2"]));
    assert_eq!(
        (v["d"].as_i64(), v["w"].as_i64(), v["m"].as_i64(), v["n"].as_i64()),
        (Some(3), Some(-1), Some(-1), Some(3))
    );
    assert_eq!(v["admissible"], Value::Bool(true));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(&keys[..4], ["d", "w", "m", "n"]);
}

#[test]
fn jacobian_at_a_real_point() {
    let v = json(&slicereg(&["jacobian", "--fn", "xminv", "--x", "3"]));
    let det = v["det"].as_f64().unwrap();
    assert!((det / (10.0f64 / 9.0).powi(4) - 1.0).abs() < 1e-12);
    assert_eq!(v["rank"].as_i64(), Some(4));
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(slicereg(&["eval", "--fn", "nope", "--x", "1"]).status.code(), Some(2));
    assert_eq!(slicereg(&["eval", "--fn", "x", "--x", "1+q"]).status.code(), Some(2));
    assert_eq!(slicereg(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_with_3() {
    // f1 lives on H minus the reals
    let out = slicereg(&["eval", "--fn", "f1", "--x", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn sample_singular_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f7.csv");
    let v = json(&slicereg(&[
        "sample-singular",
        "--fn",
        "f7",
        "--grid",
        "200",
        "--out",
        path.to_str().unwrap(),
    ]));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["x0", "x1", "x2", "x3", "det", "set"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len() as u64, v["points"].as_u64().unwrap());
    assert!(rows.iter().any(|r| &r[5] == "Df"));
    assert!(rows.iter().any(|r| &r[5] == "Nf_extra"));
    for r in &rows {
        assert!(["Df", "Wf", "Nf_extra"].contains(&&r[5]));
        assert!(r[4].parse::<f64>().unwrap().abs() < 1e-6);
    }
}

#[test]
fn table_reproduces_every_row() {
    let out = slicereg(&["table", "--json"]);
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 11);
    for r in rows {
        assert_eq!(r["expected"], r["computed"], "{r}");
    }
}

#[test]
fn univalence_demo_passes() {
    let v = json(&slicereg(&["univalence", "--samples", "300"]));
    assert_eq!(v["f_two"], serde_json::json!([1.5, 0, 0, 0]));
    assert_eq!(v["det_ok"], Value::Bool(true));
}

#[test]
fn output_is_reproducible() {
    let a = slicereg(&["classify", "--fn", "f7"]);
    let b = slicereg(&["classify", "--fn", "f7"]);
    assert_eq!(a.stdout, b.stdout);
}
