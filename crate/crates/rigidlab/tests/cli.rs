use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn rigidlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidlab")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const K4: &str = "4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
const P4: &str = "4 2\n0 0\n7 1\n2 9\n-5 4\n";
const K33: &str = "6 9\n1 4\n1 5\n1 6\n2 4\n2 5\n2 6\n3 4\n3 5\n3 6\nB: 1 2 3\n";
const P6: &str = "6 2\n1 2\n3 -1\n4 5\n0 7\n-2 3\n5 5\n";

#[test]
fn rank_of_k4_in_the_plane() {
    let dir = TempDir::new().unwrap();
    let (g, p) = (write(&dir, "k4.g", K4), write(&dir, "p.cfg", P4));
    let out = rigidlab(&["rank", "--builder", "bar_joint", "--graph", s(&g), "--points", s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["rank"].as_u64(), v["corank"].as_u64()), (Some(5), Some(1)));
    assert_eq!((v["circuit"].as_bool(), v["independent"].as_bool()), (Some(true), Some(false)));

    let out = rigidlab(&["rank", "--builder", "bar_joint", "--graph", s(&g), "--points", s(&p), "--subset", ""]);
    assert_eq!(json(&out)["rank"], 0);
    let out = rigidlab(&["rank", "--builder", "bar_joint", "--graph", s(&g), "--points", s(&p), "--subset", "1-2,2-3,1-3"]);
    assert_eq!(json(&out)["independent"], true);
}

#[test]
fn generic_rank_of_k44() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("8 16\n");
    for i in 1..=4 {
        for j in 5..=8 {
            text.push_str(&format!("{i} {j}\n"));
        }
    }
    let g = write(&dir, "k44.g", &text);
    let out = rigidlab(&["rank", "--builder", "hyper", "--graph", s(&g), "--generic", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank"], 15);
    assert_eq!(v["circuit"], true);
}

#[test]
fn build_matrix_writes_the_text_format() {
    let dir = TempDir::new().unwrap();
    let (g, p) = (write(&dir, "k33.g", K33), write(&dir, "p.cfg", P6));
    let m = dir.path().join("h.mat");
    let out = rigidlab(&["build-matrix", "--builder", "hyper", "--graph", s(&g), "--points", s(&p), "--out", s(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&m).unwrap();
    assert!(text.starts_with("# builder=hyperconnectivity n=6 d=2"));
    let matrix = rigidlab::formats::parse_matrix(&text).unwrap();
    assert_eq!((matrix.rows(), matrix.cols(), matrix.rank()), (9, 12, 8));

    for builder in ["affine_lifted", "affine_homogeneous", "bar_joint"] {
        let out = rigidlab(&["build-matrix", "--builder", builder, "--graph", s(&g), "--points", s(&p)]);
        assert_eq!(out.status.code(), Some(0), "{builder}");
    }
    let out = rigidlab(&["build-matrix", "--builder", "poly", "--graph", s(&g), "--t", "1,2,3,4,5,-6", "--d", "2", "--basis", "cofactor"]);
    assert_eq!(out.status.code(), Some(0));
    let skew = write(&dir, "ab.cfg", "4 4\n1 2 0 1\n3 -4 2 2\n5 6 -1 3\n7 9 4 -2\n");
    let out = rigidlab(&["build-matrix", "--builder", "skew", "--points", s(&skew)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.g", "4 x\n");
    let p = write(&dir, "p.cfg", P4);
    let g = write(&dir, "k4.g", K4);
    let cases: Vec<Vec<&str>> = vec![
        vec!["build-matrix", "--builder", "hyper", "--graph", s(&bad), "--points", s(&p)],
        vec!["build-matrix", "--builder", "hyper", "--graph", "/nonexistent/g", "--points", s(&p)],
        vec!["build-matrix", "--builder", "wobbly", "--graph", s(&g), "--points", s(&p)],
        vec!["build-matrix", "--builder", "cofactor", "--graph", s(&g), "--points", s(&p)],
        vec!["rank", "--builder", "bar_joint", "--graph", s(&g), "--points", s(&p), "--subset", "1-9"],
        vec!["rank", "--builder", "bar_joint", "--graph", s(&g), "--points", s(&p), "--subset", "12"],
        vec!["probe", "--n", "17", "--d", "2"],
        vec!["probe", "--n", "six", "--d", "2"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let out = rigidlab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(rigidlab(&["--help"]).status.code(), Some(0));
    assert_eq!(rigidlab(&["--version"]).status.code(), Some(0));
}

#[test]
fn precondition_violations_exit_3() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.g", K4);
    let coincident = write(&dir, "c.cfg", "4 2\n0 0\n0 0\n2 9\n-5 4\n");
    let out = rigidlab(&["build-matrix", "--builder", "cofactor", "--graph", s(&g), "--points", s(&coincident), "--d", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coincide"));

    let three = write(&dir, "p3.cfg", "3 2\n0 0\n1 0\n0 1\n");
    let out = rigidlab(&["build-matrix", "--builder", "hyper", "--graph", s(&g), "--points", s(&three)]);
    assert_eq!(out.status.code(), Some(3));

    let out = rigidlab(&["build-matrix", "--builder", "affine_lifted", "--graph", s(&g), "--points", s(&three)]);
    assert_eq!(out.status.code(), Some(3));

    let suite = write(&dir, "pre.suite", "h2_oracle n=7\n");
    assert_eq!(rigidlab(&["verify", s(&suite)]).status.code(), Some(3));
}

#[test]
fn verify_negative_control() {
    let dir = TempDir::new().unwrap();
    let suite = write(&dir, "false.suite", "generic_rank builder=r graph=K3,3 d=2 expected=9\nproperty builder=bar_joint graph=K4 d=2 claim=independent\n");
    let out = rigidlab(&["verify", s(&suite)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["status"], "fail");
    assert_eq!(v["checks"][0]["status"], "pass");
    assert_eq!(v["checks"][1]["witness"]["edges"].as_array().unwrap().len(), 6);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL property"));
}

#[test]
fn verify_manifest_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    for text in ["bogus_check d=2\n", "coincidence d=2\n", "coincidence d=2 n=4 wat=1\n", "coincidence d=2 n\n"] {
        let suite = write(&dir, "bad.suite", text);
        assert_eq!(rigidlab(&["verify", s(&suite)]).status.code(), Some(2), "{text}");
    }
    assert_eq!(rigidlab(&["verify", "/nonexistent/suite"]).status.code(), Some(2));
}

fn without_timestamp(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn reports_are_deterministic_and_flag_sampling() {
    let dir = TempDir::new().unwrap();
    let suite = write(&dir, "s.suite", "coincidence d=2 n=4\nscaling_invariance d=2 n=4\nbipartite_coincidence n1=2 n2=2 d=2\n");
    let report = dir.path().join("report.json");
    let mut runs = Vec::new();
    for _ in 0..2 {
        assert_eq!(rigidlab(&["verify", s(&suite), "--seed", "7", "--out", s(&report)]).status.code(), Some(0));
        runs.push(serde_json::from_str::<Value>(&fs::read_to_string(&report).unwrap()).unwrap());
    }
    let (va, vb) = (runs[0].clone(), runs[1].clone());
    assert_eq!(without_timestamp(va.clone()), without_timestamp(vb));
    assert_eq!(va["schema"], "rigidlab/1");
    assert_eq!(va["status"], "pass");
    assert_eq!(va["probabilistic"], false);

    let out = rigidlab(&["verify", s(&suite), "--seed", "7", "--exhaustive-limit", "0", "--subset-samples", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "probabilistic_pass");
    assert_eq!(v["probabilistic"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "probabilistic_pass"));

    let other = rigidlab(&["verify", s(&suite), "--seed", "8"]);
    assert_ne!(without_timestamp(json(&other))["checks"][0]["inputs"]["seed"], va["checks"][0]["inputs"]["seed"]);
}

#[test]
fn probe_reports_fixtures() {
    let out = rigidlab(&["probe", "--n", "6", "--d", "2", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let m = &v["checks"][0]["measurements"];
    assert_eq!((m["k3_3.rank_h"].as_i64(), m["k3_3.rank_r"].as_i64()), (Some(8), Some(9)));
    assert_eq!(v["checks"][0]["witness"], Value::Null);

    let v = json(&rigidlab(&["probe", "--n", "10", "--d", "3", "--samples", "5"]));
    let m = &v["checks"][0]["measurements"];
    assert_eq!((m["k4_6.rank_h"].as_i64(), m["k4_6.rank_r"].as_i64()), (Some(21), Some(24)));

    let v = json(&rigidlab(&["probe", "--n", "13", "--d", "4", "--samples", "1"]));
    let m = &v["checks"][0]["measurements"];
    assert_eq!(m["cone0_k6_7.rank_c"].as_i64(), Some(42));
    assert!(m["cone0_k6_7.rank_r"].as_i64().unwrap() < 42);
}

#[test]
fn default_suite_passes() {
    let suite = concat!(env!("CARGO_MANIFEST_DIR"), "/suites/default.suite");
    let out = rigidlab(&["verify", suite, "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_ne!(json(&out)["status"], "fail");
}
