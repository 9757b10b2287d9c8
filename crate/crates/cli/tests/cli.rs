use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermite-robin")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no {key} in {text}"));
    line.split('=').nth(1).unwrap().trim().parse().unwrap()
}

#[test]
fn solve1d_closed_form_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let o = cli(&["solve1d", "--sigma", "-1", "--beta", "1", "--trace", trace.to_str().unwrap()]);
    assert!(o.status.success());
    assert!((value(&stdout(&o), "lambda1") - 1.0).abs() < 1e-8);
    let csv = std::fs::read_to_string(&trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,beta_t,w"));
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], -1.0);
    assert!((last[1] - 1.0).abs() < 1e-7, "β(σ) = {}", last[1]);
}

#[test]
fn symmetrize_half() {
    let o = cli(&["symmetrize", "--measure", "0.5"]);
    let text = stdout(&o);
    assert!(value(&text, "sigma").abs() < 1e-15);
    assert!((value(&text, "g") - 0.398_942_280_401_432_7).abs() < 1e-15);
    assert!(!cli(&["symmetrize", "--measure", "1.5"]).status.success());
}

#[test]
fn sweep_csv() {
    let o = cli(&["sweep", "--beta", "1", "--sigma-min", "-1", "--sigma-max", "1", "--steps", "4"]);
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(text.lines().next(), Some("sigma,lambda1"));
    assert_eq!(rows.len(), 5);
    assert!((rows[0][1] - 1.0).abs() < 1e-8);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
}

fn write_corpus(dir: &Path, text: &str) -> String {
    let p = dir.join("corpus.json");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve2d_with_mesh_dump() {
    let dir = tempfile::tempdir().unwrap();
    let corpus =
        write_corpus(dir.path(), r#"[{"name": "d", "kind": "disk", "center": [0, 0], "radius": 1, "beta": 1}]"#);
    let dump = dir.path().join("mesh.txt");
    let o = cli(&["solve2d", "--corpus", &corpus, "--name", "d", "--h", "0.2", "--mesh-dump", dump.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(value(&text, "lambda1") > 0.0);
    assert!(value(&text, "residual") < 1e-9);
    let dofs = value(&text, "dofs") as usize;
    let mesh = std::fs::read_to_string(&dump).unwrap();
    assert_eq!(mesh.lines().filter(|l| l.starts_with("v ")).count(), dofs);
    assert!(!cli(&["solve2d", "--corpus", &corpus, "--name", "missing"]).status.success());
}

#[test]
fn verify_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path(), "[]");
    let out = dir.path().join("out");
    let o = cli(&["verify", "--corpus", &corpus, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_rejects_zero_beta() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(
        dir.path(),
        r#"[{"name": "neumann_disk", "kind": "disk", "center": [0, 0], "radius": 1, "beta": 0}]"#,
    );
    let o = cli(&["verify", "--corpus", &corpus, "--out", dir.path().join("out").to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("neumann_disk") && err.contains("beta"), "{err}");
}
