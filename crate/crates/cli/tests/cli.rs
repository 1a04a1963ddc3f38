use std::process::{Command, Output};

use serde_json::Value;

fn sommerfeld(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sommerfeld")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn surface_info_lists_two_branch_points() {
    let out = sommerfeld(&["surface", "info"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["surface"]["branch_points"].as_array().unwrap().len(), 2);
    assert_eq!(v["loop_permutations"][0], serde_json::json!([2, 1]));
}

#[test]
fn basis_at_real_anchor_matches_field() {
    let b = sommerfeld(&["basis", "--anchor", "0.1,0,0.7,0", "--angles", "pi/3"]);
    assert_eq!(b.status.code(), Some(0));
    let g1 = &json(&b)["channels"][0]["g"][0];
    let f = sommerfeld(&["field", "--phi-in", "pi/3", "--bbox", "0.1,0.2,0.7,0.8", "--nx", "2", "--ny", "2"]);
    assert_eq!(f.status.code(), Some(0));
    let text = String::from_utf8(f.stdout).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(&row[..3], &[0.1, 0.7, 1.0]);
    let (re, im) = (g1["re"].as_f64().unwrap(), g1["im"].as_f64().unwrap());
    assert!((re - row[3]).hypot(im - row[4]) < 1e-9, "{re} {im} vs {row:?}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = sommerfeld(&["basis"]);
    let b = sommerfeld(&["basis"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validation_errors_exit_one() {
    let out = sommerfeld(&["solve", "--order", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`order`"));
    let out = sommerfeld(&["monodromy", "--problem", "half-line"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sommerfeld(&["monodromy", "--angles", "pi/3,pi/4"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sommerfeld(&["continue", "--word", "13"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sommerfeld(&["nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn numerical_failure_exits_two() {
    // A1 sits on a branch point: the basis contours pinch
    let out = sommerfeld(&["basis", "--anchor", "1.0,0,0.0,0"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_file_and_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "problem = \"half-line\"\nphi_in = 1.0\nseed = 5\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = sommerfeld(&["solve", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("solve.json")).unwrap()).unwrap();
    assert_eq!(v["problem"], "half-line");
    assert_eq!(v["green_reconstruction"]["seed"], 5);
    assert!(v["green_reconstruction"]["worst_relative_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn monodromy_with_defaults_matches() {
    let out = sommerfeld(&["monodromy"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    for m in v["matrices"].as_array().unwrap() {
        assert_eq!(m["matches"], true);
        assert_eq!(m["rounded"], m["expected"]);
    }
    assert!(v["identities"]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn squared_bypass_is_trivial() {
    let out = sommerfeld(&["continue", "--word", "22,22"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let id = serde_json::json!([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
    assert_eq!(v["matrix"]["rounded"], id);
}

#[test]
fn coordinate_equations_converge_at_second_order() {
    let out = sommerfeld(&["coordeq", "--h", "2e-3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out)["consistency_ratio"].as_f64().unwrap();
    assert!((3.5..4.5).contains(&r), "{r}");
}
