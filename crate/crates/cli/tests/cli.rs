use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn torsio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsio"))
        .args(args)
        .env_remove("TORSIO_SEED")
        .output()
        .expect("binary runs")
}

fn torsio_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_torsio"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn torsion_of_three_edge_path() {
    let out = torsio(&["torsion", &data("path3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["rigidity"], 14.0);
    let tau: Vec<f64> = v["tau"].as_array().unwrap().iter().map(|e| e["value"].as_f64().unwrap()).collect();
    assert_eq!(tau, vec![0.0, 3.0, 5.0, 6.0]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = ["\"p\"", "\"rigidity\"", "\"residual\"", "\"iterations\"", "\"method\"", "\"tau\""];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "field order");
}

#[test]
fn torsion_at_other_exponents() {
    let out = torsio(&["torsion", &data("path3.json"), "--p", "3", "--method", "newton"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["p"], 3.0);
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
    let gs = torsio(&["torsion", &data("path3.json"), "--p", "3", "--method", "gauss-seidel", "--tol", "1e-12"]);
    let w = stdout_json(&gs);
    assert!((w["rigidity"].as_f64().unwrap() - v["rigidity"].as_f64().unwrap()).abs() < 1e-8);
}

#[test]
fn figure4_starts_at_one() {
    let out = torsio(&["figure4", "--emax", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 13);
    assert_eq!(header[0], "E");
    let col = header.iter().position(|h| *h == "kj_path_deg").unwrap();
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 10);
    assert!((rows[0][col] - 1.0).abs() < 1e-12);
    assert!(rows.windows(2).all(|w| w[1][col] > w[0][col]));
}

#[test]
fn figure4_as_json() {
    let out = torsio(&["figure4", "--emax", "2", "--format", "json"]);
    let v = stdout_json(&out);
    assert_eq!(v[1]["E"], 2);
    assert_eq!(v[1]["T2_path_deg"], 10.0);
}

#[test]
fn bounds_on_degree_star() {
    let out = torsio(&["bounds", &data("star5_deg.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["violations"], 0);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 22);
    assert!(checks.iter().all(|c| c["verdict"] != "violated" && c["verdict"] != "inconclusive"));
    let md = torsio(&["bounds", &data("star5_deg.json"), "--format", "md"]);
    assert_eq!(md.status.code(), Some(0));
    assert!(String::from_utf8(md.stdout).unwrap().contains("| kohler_jobin_classical |"));
}

#[test]
fn bounds_with_two_dirichlet_vertices() {
    let out = torsio(&["bounds", &data("two_dirichlet.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["dirichlet_count"], 2);
    assert_eq!(v["evidence"], "variational_upper_bound");
}

#[test]
fn lambda0_and_metrics() {
    let out = torsio(&["lambda0", &data("path3.json")]);
    let v = stdout_json(&out);
    let expected = 2.0 - 2.0 * (std::f64::consts::PI / 7.0).cos();
    assert!((v["lambda0"].as_f64().unwrap() - expected).abs() < 1e-12);
    assert_eq!(v["evidence"], "exact");
    let m = stdout_json(&torsio(&["metrics", &data("path3.json")]));
    assert_eq!(m["inradius"], 3.0);
    assert_eq!(m["mean_distance"], 2.0);
    assert_eq!(m["min_cut_weight"], 1.0);
}

#[test]
fn validate_reports_counts() {
    let v = stdout_json(&torsio(&["validate", &data("two_dirichlet.json")]));
    assert_eq!(v["valid"], true);
    assert_eq!(v["edge_count"], 3);
    assert_eq!(v["free_count"], 2);
}

#[test]
fn documents_round_trip() {
    for name in ["path3.json", "star5_deg.json", "two_dirichlet.json"] {
        let first = torsio(&["surgery", "scale", &data(name), "--mu", "0.1", "--lambda", "3"]);
        assert_eq!(first.status.code(), Some(0));
        let again = torsio_stdin(&["surgery", "scale", "-"], std::str::from_utf8(&first.stdout).unwrap());
        assert_eq!(first.stdout, again.stdout, "{name}");
    }
}

#[test]
fn surgery_outputs_parse() {
    let merged = stdout_json(&torsio(&["surgery", "merge-dirichlet", &data("two_dirichlet.json")]));
    assert_eq!(merged["dirichlet"].as_array().unwrap().len(), 1);
    assert_eq!(merged["vertices"].as_array().unwrap().len(), 3);
    let inv = stdout_json(&torsio(&["surgery", "invert", &data("two_dirichlet.json")]));
    assert_eq!(inv["edges"][2]["b"].as_f64().unwrap(), 1.0 / 3.0);
    let sym = stdout_json(&torsio(&["surgery", "symmetrize", &data("star5_deg.json")]));
    assert_eq!(sym["edges"].as_array().unwrap().len(), 5);
    assert_eq!(sym["vertices"][1]["id"], "v1");
}

#[test]
fn generators_honour_the_seed() {
    let a = torsio(&["generate", "random", "--n", "6", "--seed", "11"]);
    let b = Command::new(env!("CARGO_BIN_EXE_torsio"))
        .args(["generate", "random", "--n", "6"])
        .env("TORSIO_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let c = torsio(&["generate", "random", "--n", "6", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
    let tree = stdout_json(&torsio(&["generate", "random", "--n", "6", "--tree", "--mass", "deg"]));
    assert_eq!(tree["edges"].as_array().unwrap().len(), 5);
}

#[test]
fn output_is_deterministic() {
    let a = torsio(&["bounds", &data("two_dirichlet.json")]);
    let b = torsio(&["bounds", &data("two_dirichlet.json")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_one() {
    let bad = r#"{"version":1,"vertices":[{"id":"a","m":1}],"edges":[],"dirichlet":["q"]}"#;
    let out = torsio_stdin(&["validate", "-"], bad);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "SchemaError");
    let out = torsio_stdin(&["validate", "-"], "{\"version\":1,\n\"vertices\":[{\"id\":\"a\"}]}");
    assert_eq!(out.status.code(), Some(1));
    let msg = stderr_json(&out)["message"].as_str().unwrap().to_string();
    assert!(msg.contains("line 2"), "{msg}");
    let out = torsio(&["torsion", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "Io");
    let out = torsio(&["torsion", &data("path3.json"), "--format", "md"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "Usage");
    let out = torsio(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn numerical_failures_exit_two() {
    let args = ["torsion", &data("path3.json"), "--p", "3", "--method", "gauss-seidel", "--tol", "1e-14", "--max-iter", "3"];
    let out = torsio(&args);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stderr_json(&out)["error"], "NoConvergence");
}
