use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn polylt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polylt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = polylt(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    });
    (v, out.status.code().unwrap())
}

fn assert_envelope(v: &Value) {
    for key in ["inputs", "values", "tolerances", "verdict", "version"] {
        assert!(v.get(key).is_some(), "missing {key} in {v}");
    }
}

#[test]
fn constants_biharmonic() {
    let (v, code) = json(&["constants", "--l", "2", "--gamma", "0.75", "--d", "1", "--json"]);
    assert_eq!(code, 0);
    assert_envelope(&v);
    let vals = &v["values"];
    assert!((vals["classical"].as_f64().unwrap() - 0.265_165_0).abs() < 1e-7);
    assert!((vals["ground_state"].as_f64().unwrap() - 0.353_553_4).abs() < 1e-7);
    let bound = vals["bounds"]["biharmonic_critical"].as_f64().unwrap();
    assert!((bound - 3f64.powf(0.75) / 4.0).abs() < 1e-12);
}

#[test]
fn delta_single_site() {
    let (v, code) = json(&["delta", "--sites", "0:1", "--l", "2", "--json", "--eval", "0,4.71238898038469"]);
    assert_eq!(code, 0);
    let k = v["values"]["kappas"][0].as_f64().unwrap();
    assert!((k - 0.25).abs() < 1e-10);
    let u = &v["values"]["eigenfunctions"][0]["u"];
    assert!(u[1].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn delta_from_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "position,strength\n0,1\n30,1").unwrap();
    let (v, code) = json(&["delta", "--l", "1", "--file", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["kappas"].as_array().unwrap().len(), 2);
}

#[test]
fn halfline_value() {
    let (v, code) = json(&["halfline", "--json"]);
    assert_eq!(code, 0);
    let p = v["values"]["kappa_plus_pow_3_4"].as_f64().unwrap();
    assert!((p - 2f64.sqrt()).abs() < 1e-8);
}

#[test]
fn identity_suite_exit_zero() {
    let out = polylt(&["verify", "--suite", "identities"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: pass"));
}

#[test]
fn ensemble_output_is_deterministic() {
    let args = ["verify", "--suite", "ensemble", "--count", "4", "--seed", "11", "--json"];
    let a = polylt(&args);
    let b = polylt(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = polylt(&["verify", "--suite", "ensemble", "--count", "4", "--seed", "12", "--json"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn system_suite_passes() {
    let (v, code) = json(&["verify", "--suite", "system", "--a", "1,4", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["verdict"], Value::Bool(true));
}

#[test]
fn spectrum_from_potential_csv() {
    let n = 64;
    let l = 8.0;
    let h = 2.0 * l / n as f64;
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "x,v_11").unwrap();
    for i in 0..n {
        let x = -l + i as f64 * h;
        writeln!(f, "{x},{}", -2.0 * (-x * x).exp()).unwrap();
    }
    let path = f.path().to_str().unwrap();
    let (v, code) = json(&["spectrum", "--potential", path, "--l", "2", "--theorem", "biharmonic_critical", "--json"]);
    assert_eq!(code, 0, "{v}");
    assert!(v["values"]["count"].as_u64().unwrap() >= 1);
    assert_eq!(v["values"]["bound"]["verdict"], Value::Bool(true));

    let out = polylt(&["spectrum", "--potential", path, "--theorem", "no_such_theorem"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matrix_potential_csv_with_tensor_symbol() {
    let n = 32;
    let l = 6.0;
    let h = 2.0 * l / n as f64;
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "x,v_11,v_12r,v_12i,v_22").unwrap();
    for i in 0..n {
        let x = -l + i as f64 * h;
        let w = -(-x * x).exp();
        writeln!(f, "{x},{w},0.1,0.05,{w}").unwrap();
    }
    let out = polylt(&[
        "spectrum", "--potential", f.path().to_str().unwrap(), "--symbol", "tensor", "--a", "1,4", "--gamma", "1", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn counterexample_and_usage_errors() {
    let (v, code) = json(&["counterexample", "--l", "2", "--alphas", "16", "--json"]);
    assert_eq!(code, 0);
    assert!(v["values"]["excess"].as_f64().unwrap() > 0.0);
    assert_eq!(polylt(&["counterexample", "--l", "1"]).status.code(), Some(2));
    assert_eq!(polylt(&["delta", "--l", "2", "--sites", "0-1"]).status.code(), Some(2));
    assert_eq!(polylt(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(polylt(&["constants", "--l", "2", "--gamma", "-1"]).status.code(), Some(2));
}

#[test]
fn weyl_and_majorization_run() {
    let (v, code) = json(&["weyl", "--l", "1", "--gamma", "1.5", "--alphas", "1,4", "--points", "64", "--json"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["values"]["points"].as_array().unwrap().len(), 2);
    let (v, code) = json(&["majorization", "--points", "81", "--grid", "40", "--json"]);
    assert_eq!(code, 0, "{v}");
    assert!(v["values"]["worst_violation"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn out_flag_writes_file_and_csv_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = polylt(&["constants", "--l", "3", "--gamma", "1", "--csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("name,value\n"));
    assert!(text.contains("classical,"));
}
