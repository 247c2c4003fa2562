use std::process::{Command, Output};

use serde_json::Value;

fn pcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcf")).args(args).output().expect("run pcf")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    (v.as_f64().unwrap() - want).abs() <= tol * want.abs().max(1.0)
}

fn csv_rows(out: &Output) -> Vec<Vec<f64>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re_arg,im_arg,re_value,im_value,abs_err"));
    lines.map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect()
}

#[test]
fn eval_exact_cases() {
    let out = pcf(&["eval", "--fn", "U", "--a", " -0.5,0", "--arg", "2,0"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["function"], "U");
    assert_eq!(v["a"]["re"], -0.5);
    assert_eq!(v["arg"]["re"], 2.0);
    assert!(close(&v["value"]["re"], (-1.0f64).exp(), 1e-12));
    assert!(close(&v["value"]["im"], 0.0, 1e-14));
    assert!(v["abs_err_estimate"].as_f64().unwrap() >= 0.0);
    assert!(v["path"].as_array().unwrap().iter().all(|p| p.is_string()));

    let v = json(&pcf(&["eval", "--fn", "E+", "--a", "0, 0.5", "--arg", "2,0"]));
    assert!(close(&v["value"]["re"], 1f64.cos(), 1e-12));
    assert!(close(&v["value"]["im"], 1f64.sin(), 1e-12));

    let v = json(&pcf(&["eval", "--fn", "V", "--a", "0.5,0", "--arg", "1,0"]));
    assert!(close(&v["value"]["re"], 1.024_504_055_653_615, 1e-12));
}

#[test]
fn hyphenated_values_parse() {
    let out = pcf(&["eval", "--fn", "W", "--a", "-0.25,0", "--arg", "-1.5,0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn table_of_polynomial_case() {
    let out = pcf(&["table", "--fn", "U", "--a", "-0.5,0", "--start", "1,0", "--end", "3,0", "--steps", "3"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    for (row, (x, want)) in rows.iter().zip([(1.0, -0.25f64), (2.0, -1.0), (3.0, -2.25)]) {
        assert_eq!(row[0], x);
        assert!((row[2] - want.exp()).abs() < 1e-12 * want.exp());
    }
    let text = String::from_utf8(out.stdout).unwrap();
    let field = text.lines().nth(1).unwrap().split(',').nth(2).unwrap();
    let mantissa = field.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn table_rows_match_single_evaluations() {
    let out = pcf(&["table", "--fn", "E+", "--a", "0,0", "--start", "1,0", "--end", "10,0", "--steps", "10"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 10);
    for row in rows {
        let arg = format!("{:e},{:e}", row[0], row[1]);
        let v = json(&pcf(&["eval", "--fn", "E+", "--a", "0,0", "--arg", &arg]));
        assert_eq!(v["value"]["re"].as_f64().unwrap(), row[2]);
        assert_eq!(v["value"]["im"].as_f64().unwrap(), row[3]);
    }
}

#[test]
fn single_step_table_equals_eval() {
    let out = pcf(&["table", "--fn", "V", "--a", "0.3,0.2", "--start", "1.5,0.5", "--end", "9,9", "--steps", "1"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    let v = json(&pcf(&["eval", "--fn", "V", "--a", "0.3,0.2", "--arg", "1.5,0.5"]));
    assert_eq!(v["value"]["re"].as_f64().unwrap(), rows[0][2]);
    assert_eq!(v["value"]["im"].as_f64().unwrap(), rows[0][3]);
}

#[test]
fn formats_and_output_file() {
    let csv = pcf(&["eval", "--fn", "U", "--a", "0,0", "--arg", "1,0", "--csv"]);
    assert_eq!(csv_rows(&csv).len(), 1);
    let table = json(&pcf(&["table", "--fn", "U", "--a", "0,0", "--start", "1,0", "--end", "2,0", "--steps", "2", "--json"]));
    assert_eq!(table.as_array().unwrap().len(), 2);
    assert!(!pcf(&["eval", "--fn", "U", "--a", "0,0", "--arg", "1,0", "--csv", "--json"]).status.success());

    let path = std::env::temp_dir().join(format!("pcf-cli-test-{}.json", std::process::id()));
    let out = pcf(&["eval", "--fn", "U", "--a", "0,0", "--arg", "1,0", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(close(&v["value"]["re"], 0.653_072_026_699_361_9, 1e-12));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["eval", "--fn", "X", "--a", "0,0", "--arg", "1,0"],
        vec!["eval", "--fn", "U", "--a", "0", "--arg", "1,0"],
        vec!["eval", "--fn", "U", "--a", "0,0", "--arg", "1,0", "--rel-tol", "-1"],
        vec!["table", "--fn", "U", "--a", "0,0", "--start", "1,0", "--end", "2,0", "--steps", "0"],
        vec!["verify", "--suite", "bogus"],
    ] {
        assert_eq!(pcf(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn evaluator_errors_exit_one() {
    for arg in ["nan,0", "1000,0"] {
        let out = pcf(&["eval", "--fn", "V", "--a", "0,0", "--arg", arg]);
        assert_eq!(out.status.code(), Some(1));
        assert!(json(&out)["error"].is_string());
    }
}

#[test]
fn verify_suites() {
    let out = pcf(&["verify", "--suite", "lemma"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["suite_id"], "lemma");
    assert_eq!(report["passed"], true);

    let out = pcf(&["verify", "--suite", "all", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report["worst_residual"].as_f64().unwrap() <= 1e-8);
    let cases = report["cases"].as_array().unwrap();
    assert!(cases.len() > 300);
    assert!(cases.iter().enumerate().all(|(i, c)| c["index"] == i));
}

#[test]
fn verify_is_deterministic_and_seeded() {
    let a = pcf(&["verify", "--suite", "ode", "--seed", "7"]).stdout;
    let b = pcf(&["verify", "--suite", "ode", "--seed", "7"]).stdout;
    assert_eq!(a, b);
    let c = pcf(&["verify", "--suite", "ode"]).stdout;
    assert_ne!(a, c);
}
