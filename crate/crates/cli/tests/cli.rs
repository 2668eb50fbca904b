use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn fmetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmetric")).args(args).env_remove("FMETRIC_TOL").output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_reports_each_axiom() {
    let space = fixture("squared4.json");
    let out = fmetric(&["verify", "--space", space.to_str().unwrap(), "--alpha", "1.0986122886681098"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    for key in ["d1", "d3"] {
        assert_eq!(v["report"][key]["verdict"], "pass");
    }
    assert_eq!(v["report"]["d2"]["verdict"]["verdict"], "pass");
}

#[test]
fn verify_failure_carries_evidence() {
    let space = fixture("squared3.json");
    let out = fmetric(&["verify", "--space", space.to_str().unwrap(), "--generator", "log", "--alpha", "0.405"]);
    assert_eq!(out.status.code(), Some(1));
    let ev = &json(&out)["report"]["d3"]["evidence"];
    assert_eq!(ev["pair"]["i"], 0);
    assert_eq!(ev["pair"]["j"], 2);
    assert_eq!(ev["chain"], serde_json::json!([0, 1, 2]));
}

#[test]
fn csv_input_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.csv");
    std::fs::write(&path, "a,b,c\n0,1,4\n1,0,1\n4,1,0\n").unwrap();
    let out = fmetric(&["min-alpha", "--space", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let a = json(&out)["report"]["alpha_star"].as_f64().unwrap();
    assert!((a - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("asym.json");
    std::fs::write(&bad, r#"{"labels":["a","b"],"matrix":[[0,1],[2,0]]}"#).unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["verify".into(), "--space".into(), bad.display().to_string()],
        vec!["verify".into(), "--space".into(), "/nonexistent.json".into()],
        vec!["verify".into(), "--space".into(), fixture("squared4.json").display().to_string(), "--generator".into(), "cosh".into()],
        vec!["verify".into()],
        vec!["sweep".into(), "--trials".into(), "0".into()],
        vec!["frobnicate".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = fmetric(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = fmetric(&["verify", "--space", bad.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("asymmetric"));
}

#[test]
fn certify_and_induce() {
    let space = fixture("squared4.json");
    let s = space.to_str().unwrap();
    let out = fmetric(&["certify", "--space", s, "--alpha", "1.0986122886681098", "--epsilons", "0.1,1,10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["certificate"]["entries"].as_array().unwrap().len(), 3);
    assert_eq!(v["report"]["conclusion"], "metrizability certificate valid on this finite sample");

    let out = fmetric(&["induce", "--space", s, "--alpha", "1.0986122886681098"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["induced"]["matrix"][0], serde_json::json!([0.0, 1.0, 2.0, 3.0]));
    assert_eq!(v["report"]["induced"]["derived_from"]["generator"], "log");

    // not an F-metric under ln 1.5: refused with the axiom report
    let sq3 = fixture("squared3.json");
    let out = fmetric(&["certify", "--space", sq3.to_str().unwrap(), "--alpha", "0.4054651081081644"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["report"]["refused"]["passed"], false);
}

#[test]
fn table_output_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.txt");
    let space = fixture("squared4.json");
    let out = fmetric(&[
        "min-alpha",
        "--space",
        space.to_str().unwrap(),
        "--format",
        "table",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(out_path).unwrap();
    assert!(text.starts_with("alpha* = 1.09861229"), "{text}");
}

#[test]
fn tolerance_from_environment() {
    let space = fixture("squared3.json");
    // ln 4 - ln 2 - 0.69 ≈ 0.0031: fails at the default, passes with a loose tolerance
    let args = ["verify", "--space", space.to_str().unwrap(), "--alpha", "0.69"];
    assert_eq!(fmetric(&args).status.code(), Some(1));
    let loose = Command::new(env!("CARGO_BIN_EXE_fmetric")).args(args).env("FMETRIC_TOL", "0.01").output().unwrap();
    assert_eq!(loose.status.code(), Some(0));
    assert_eq!(json(&loose)["tol"], 0.01);
    let bad = Command::new(env!("CARGO_BIN_EXE_fmetric")).args(args).env("FMETRIC_TOL", "-1").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn search_reports_template_hit() {
    let out = fmetric(&["search", "--generator", "log", "--alpha", "1.0986122886681098", "--n", "4", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let hits = json(&out)["report"]["hits"].as_array().unwrap().clone();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0]["trial"], 0);

    let out = fmetric(&["search", "--alpha", "1.0986122886681098", "--n", "2", "--trials", "100"]);
    assert!(json(&out)["report"]["hits"].as_array().unwrap().is_empty());
}
