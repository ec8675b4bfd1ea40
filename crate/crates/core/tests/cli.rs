mod common;

use std::process::{Command, Output};

use common::fixture_path;
use serde_json::Value;

fn ed2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ed2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("UTF-8")
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(&ed2(args))).expect("valid JSON")
}

fn surface(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

#[test]
fn json_is_byte_identical_across_runs_and_worker_counts() {
    let s = surface("wave");
    let one = stdout(&ed2(&["analyze", "--surface", &s, "--workers", "1"]));
    let again = stdout(&ed2(&["analyze", "--surface", &s, "--workers", "1"]));
    let many = stdout(&ed2(&["analyze", "--surface", &s, "--workers", "4"]));
    assert_eq!(one, again);
    assert_eq!(one, many);
}

#[test]
fn report_has_documented_top_level_keys() {
    let doc = json(&["check", "--surface", &surface("example")]);
    let keys: Vec<&str> = doc
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    for k in ["spec_digest", "grid", "points", "summary", "version"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(doc["spec_digest"].as_str().unwrap().len(), 64);
    assert_eq!(doc["summary"]["is_bdr_solution"], Value::Bool(true));
}

#[test]
fn points_are_row_major_in_u_then_v() {
    let doc = json(&[
        "classify",
        "--surface",
        &surface("example"),
        "--u",
        "0:1:2",
        "--v",
        "0:1:3",
    ]);
    let uv: Vec<(f64, f64)> = doc["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["u"].as_f64().unwrap(), p["v"].as_f64().unwrap()))
        .collect();
    assert_eq!(
        uv,
        [
            (0.0, 0.0),
            (0.0, 0.5),
            (0.0, 1.0),
            (1.0, 0.0),
            (1.0, 0.5),
            (1.0, 1.0)
        ]
    );
}

#[test]
fn classify_csv_header_is_exact() {
    let out = stdout(&ed2(&[
        "classify",
        "--surface",
        &surface("example"),
        "--format",
        "csv",
    ]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("u,v,Delta,K,rankA,class"));
    assert_eq!(lines.count(), 25);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let s = surface("wave");
    let doc = json(&["classify", "--surface", &s]);
    let csv = stdout(&ed2(&["classify", "--surface", &s, "--format", "csv"]));
    for (p, line) in doc["points"]
        .as_array()
        .unwrap()
        .iter()
        .zip(csv.lines().skip(1))
    {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(
            cells[2].parse::<f64>().unwrap(),
            p["Delta"].as_f64().unwrap()
        );
        assert_eq!(cells[3].parse::<f64>().unwrap(), p["K"].as_f64().unwrap());
        assert_eq!(cells[5], p["class"].as_str().unwrap());
    }
}

#[test]
fn analyze_appends_ellipse_samples() {
    let out = stdout(&ed2(&[
        "analyze",
        "--surface",
        &surface("example"),
        "--u",
        "0:0:1",
        "--v",
        "0:0:1",
        "--ellipse",
        "16",
        "--format",
        "csv",
    ]));
    let mut lines = out.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), row.len());
    assert_eq!(
        header.iter().filter(|h| h.starts_with("ellipse_")).count(),
        32
    );
    assert_eq!(*header.last().unwrap(), "ellipse_y_15");
}

#[test]
fn single_point_grid() {
    let doc = json(&[
        "analyze",
        "--surface",
        &surface("example"),
        "--u",
        "1:1:1",
        "--v",
        "0:0:1",
    ]);
    assert_eq!(doc["points"].as_array().unwrap().len(), 1);
    assert_eq!(
        doc["points"][0]["report"]["ellipse"]["class"],
        "InflectionFlat"
    );
}

#[test]
fn mixed_surface_has_several_classes() {
    let doc = json(&["classify", "--surface", &surface("wave")]);
    assert!(doc["summary"]["class_histogram"].as_object().unwrap().len() >= 2);
}

#[test]
fn per_point_failures_keep_exit_zero() {
    let doc = json(&["check", "--surface", &surface("circle")]);
    assert_eq!(doc["summary"]["errors"]["E_DEGENERATE_E"], 25);
    assert_eq!(
        doc["summary"]["is_bdr_solution"],
        "indeterminate: no valid points"
    );
}

#[test]
fn frame_and_ellipse_commands() {
    let doc = json(&[
        "frame",
        "--surface",
        &surface("example"),
        "--u",
        "0:0:1",
        "--v",
        "0:0:1",
    ]);
    let d: Vec<f64> = doc["points"][0]["D"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    for (x, want) in d.iter().zip([0.0, 0.0, 0.0, 1.0]) {
        assert!((x - want).abs() < 1e-12);
    }
    let out = stdout(&ed2(&[
        "ellipse",
        "--surface",
        &surface("example"),
        "--u",
        "0:0:1",
        "--v",
        "0:0:1",
        "--ellipse",
        "8",
    ]));
    assert_eq!(out.lines().next(), Some("u,v,status,theta,x,y"));
    assert_eq!(out.lines().count(), 9);
}

#[test]
fn out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = ed2(&[
        "check",
        "--surface",
        &surface("helix"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["summary"]["is_bdr_solution"], Value::Bool(false));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        "[surface]\nx = \"x\"\ny = \"0\"\nz = \"0\"\nw = \"v\"\n[normal]\nf = \"x\"\n",
    )
    .unwrap();
    let config = ed2(&[
        "check",
        "--surface",
        bad.to_str().unwrap(),
        "--u",
        "0:1:2",
        "--v",
        "0:1:2",
    ]);
    assert_eq!(config.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&config.stderr).contains("omega may reference only u, v"));

    let syntax = ed2(&[
        "check",
        "--surface",
        &surface("example"),
        "--u",
        "0:2*^pi:3",
    ]);
    assert_eq!(syntax.status.code(), Some(1));

    let missing = ed2(&[
        "check",
        "--surface",
        dir.path().join("none.toml").to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2));

    let unwritable = dir.path().join("no/such/dir/out.json");
    let io = ed2(&[
        "check",
        "--surface",
        &surface("example"),
        "--out",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(io.status.code(), Some(2));
}
