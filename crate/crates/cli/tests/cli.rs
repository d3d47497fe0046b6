use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_equiaffine"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

const FLAT_SCENE: &str = r#"
checks = "all"
points = "random 5 seed 42"

[chart]
catalog = "flat_hypersphere(2, 1)"
"#;

#[test]
fn flat_hypersphere_scene_passes_with_known_mean_curvature() {
    let out = run_stdin(&["check", "--scene", "-"], FLAT_SCENE);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["schema"], 1);
    let points = report["points"].as_array().unwrap();
    assert_eq!(points.len(), 5);
    for p in points {
        let l1 = p["l1"].as_f64().unwrap();
        assert!((l1 + 0.43869).abs() < 1e-5, "{l1}");
        assert!(p["checks"].as_array().unwrap().len() >= 7);
    }
    assert_eq!(report["summary"]["passed"], true);
}

#[test]
fn non_sphere_graph_fails_hypersphere_check() {
    let out = run(&["check", "--chart", "graph(x3=(u1)^4+(u2)^2)", "--points", "1,1", "--checks", "hypersphere"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["summary"]["passed"], false);
    assert!(report["summary"]["failed_checks"].as_u64().unwrap() >= 1);
}

#[test]
fn malformed_scene_reports_position() {
    let out = run_stdin(&["check", "--scene", "-"], "[chart\ncatalog = 1\n");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn scene_errors_exit_two() {
    let bad_check = "checks = [\"curvature\"]\n[chart]\ncatalog = \"unit_sphere(2)\"\n";
    assert_eq!(run_stdin(&["check", "--scene", "-"], bad_check).status.code(), Some(2));
    let no_chart = "checks = \"gauss\"\n[chart]\n";
    assert_eq!(run_stdin(&["check", "--scene", "-"], no_chart).status.code(), Some(2));
    assert_eq!(run(&["check", "--chart", "unit_sphere(2)", "--tol", "bogus=1"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--chart", "dim 1; x1 = u1; x2 = u1 +;"]).status.code(), Some(2));
}

#[test]
fn chart_errors_exit_three() {
    assert_eq!(run(&["check", "--chart", "torus(2)"]).status.code(), Some(3));
    assert_eq!(run(&["check", "--chart", "sl_so(2)"]).status.code(), Some(3));
    assert_eq!(run(&["check", "--chart", "unit_sphere(2)", "--points", "0.1,0.1,0.1"]).status.code(), Some(3));
    // a cylinder is not strongly convex
    let out = run(&["invariants", "--chart", "dim 2; x1 = u1; x2 = u2; x3 = u1^2;", "--points", "0,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out)["points"][0]["error"].is_string());
}

#[test]
fn reports_are_byte_identical() {
    let args = ["check", "--chart", "sl_so(3)", "--points", "random 4 seed 7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["check", "--chart", "sl_so(3)", "--points", "random 4 seed 8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("equiaffine-report-{}.json", std::process::id()));
    let out = run(&["invariants", "--chart", "unit_sphere(3)", "--points", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    for p in report["points"].as_array().unwrap() {
        assert!((p["l1"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn compose_reports_closed_form_mean_curvature() {
    let out = run(&["compose", "--r", "1", "--factor", "flat_hypersphere(2, 1)", "--points", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    let l1 = report["info"]["L1"].as_f64().unwrap();
    for p in report["points"].as_array().unwrap() {
        assert!((p["l1"].as_f64().unwrap() - l1).abs() < 1e-8);
        let names: Vec<&str> = p["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
        assert!(names.contains(&"mean_curvature") && names.contains(&"block_sparsity"), "{names:?}");
    }
    assert_eq!(run(&["compose", "--r", "1"]).status.code(), Some(3));
}

#[test]
fn dual_reports_negated_mean_curvature() {
    let out = run(&["dual", "--chart", "hyperboloid(2)", "--points", "2"]);
    assert_eq!(out.status.code(), Some(0));
    for p in json(&out)["points"].as_array().unwrap() {
        assert!((p["extra"]["dual_c"].as_f64().unwrap() + p["l1"].as_f64().unwrap()).abs() < 1e-15);
    }
}

#[test]
fn jordan_selftest_passes() {
    let out = run(&["jordan", "selftest", "--seed", "3", "--l1", "-0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report["checks"].as_array().unwrap().len() >= 30);
    assert_eq!(run(&["jordan", "selftest", "--l1", "1"]).status.code(), Some(3));
}

#[test]
fn catalog_list_names_every_chart() {
    let out = run(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> =
        json(&out)["charts"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect();
    for n in ["flat_hypersphere", "unit_sphere", "elliptic_paraboloid", "hyperboloid", "sl_so", "graph"] {
        assert!(names.iter().any(|x| x == n), "{n}");
    }
}

#[test]
fn text_format_has_summary() {
    let out = run(&["check", "--chart", "elliptic_paraboloid(2)", "--points", "1", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("schema 1 check"));
    assert!(text.contains("summary PASS"));
}
