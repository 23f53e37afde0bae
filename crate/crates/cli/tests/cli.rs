use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ropesweep_core::corpus::{square_polygon, trefoil_polygon};
use ropesweep_core::{IsotopyPath, PolygonalKnot, ThicknessBreakdown};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ropesweep"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn ropesweep")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

/// Scratch directory private to one test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ropesweep-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write<T: serde::Serialize>(dir: &Path, file: &str, v: &T) -> String {
    let p = dir.join(file);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn generate_circle(dir: &Path, file: &str, thi: f64) -> String {
    let r = thi / (PI / 64.0).cos();
    let o = run(&["generate", "regular-ngon", "--param", "n=64", "--param", &format!("r={r}")]);
    let p = dir.join(file);
    std::fs::write(&p, &o.stdout).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn square_has_unit_thickness() {
    let dir = scratch("square");
    let k = write(&dir, "sq.json", &square_polygon(2.0, 1).unwrap());
    let v = json(&run(&["thickness", &k]));
    assert!((v["thickness"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let rop = json(&run(&["rop", &k]));
    assert!((rop["ropelength"].as_f64().unwrap() - 8.0).abs() < 1e-12);
    assert_eq!(rop["sizes"].as_array().unwrap().len(), 2);
}

#[test]
fn generated_knot_round_trips_through_thickness() {
    let dir = scratch("roundtrip");
    let o = run(&["generate", "trefoil-polygon", "--param", "n=60", "--param", "scale=1.5"]);
    let k: PolygonalKnot = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(k, trefoil_polygon(60, 1.5).unwrap());
    let path = write(&dir, "t.json", &k);
    let b: ThicknessBreakdown = serde_json::from_slice(&run(&["thickness", &path]).stdout).unwrap();
    assert_eq!(b, ropesweep_core::thickness(&k));
}

#[test]
fn circle_pair_bound() {
    let dir = scratch("bound");
    let a = generate_circle(&dir, "a.json", 1.0);
    let b = generate_circle(&dir, "b.json", 2.0);
    let v = json(&run(&["bound", &a, &b]));
    let want = 3.0 * PI / (PI / 64.0).cos().powi(2) * (2.0 * PI / 64.0).sin() / (2.0 * PI / 64.0);
    assert!((v["sup_plane"]["value"].as_f64().unwrap() - want).abs() < 1e-9);
    assert_eq!(v["projected"]["kind"], "LowerBound");
    // sign of the normal does not matter
    let flipped = json(&run(&["bound", &a, &b, "--plane", "0", "0", "-1"]));
    assert_eq!(flipped["projected"]["value"], v["projected"]["value"]);
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["thickness", "/nonexistent/knot.json"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "regular-ngon", "--param", "radius=2"]).status.code(), Some(2));
    let dir = scratch("bad");
    let p = dir.join("two.json");
    std::fs::write(&p, r#"{"vertices":[[0,0,0],[1,0,0]]}"#).unwrap();
    let o = run(&["thickness", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert!(o.stdout.is_empty());
    let zero = run(&["diagram", p.to_str().unwrap(), "--u", "0", "0", "0"]);
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn thin_endpoint_is_a_validation_error() {
    let dir = scratch("thin");
    let a = generate_circle(&dir, "a.json", 0.5);
    let b = generate_circle(&dir, "b.json", 2.0);
    let o = run(&["optimize", &a, &b, "--lambda", "13", "--keyframes", "8", "--time-samples", "16"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("start"));
}

#[test]
fn optimize_output_feeds_sweep() {
    let dir = scratch("optimize");
    let a = generate_circle(&dir, "a.json", 1.0);
    let b = generate_circle(&dir, "b.json", 1.5);
    let level = format!("{}", 3.0 * PI / (PI / 64.0).cos());
    let args = ["optimize", &a, &b, "--lambda", &level, "--keyframes", "8", "--time-samples", "32", "--seed", "3"];
    let r = json(&run(&args));
    assert_eq!(r["admissible"], true);
    // same seed, same bytes
    assert_eq!(run(&args).stdout, run(&args).stdout);

    let path: IsotopyPath = serde_json::from_value(r["path"].clone()).unwrap();
    let p = write(&dir, "path.json", &path);
    let s = json(&run(&["sweep", &p, "--lambda", &level, "--time-samples", "16"]));
    assert_eq!(s["total"], r["upper_bound"]);
    assert_eq!(s["admissibility"]["admissible"], true);

    let csv = stdout(&run(&["sweep", &p, "--csv"]));
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "interval,t0,t1,area");
    assert_eq!(rows.len(), path.keyframes().len());
    let sum: f64 = rows[1..].iter().map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((sum - s["total"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn lambda_sweep_csv() {
    let dir = scratch("lsweep");
    let a = generate_circle(&dir, "a.json", 1.0);
    let b = generate_circle(&dir, "b.json", 1.5);
    let base = 3.0 * PI / (PI / 64.0).cos();
    let levels = format!("{},{},{}", 0.5 * base, base, 1.5 * base);
    let o = run(&["lambda-sweep", &a, &b, "--levels", &levels, "--keyframes", "8", "--time-samples", "16", "--csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["lambda", "upper_bound"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1][1], "");
    let v1: f64 = rows[2][1].parse().unwrap();
    let v2: f64 = rows[3][1].parse().unwrap();
    assert!(v2 <= v1);

    let descending = run(&["lambda-sweep", &a, &b, "--levels", "20,10"]);
    assert_eq!(descending.status.code(), Some(2));
}

#[test]
fn merge_scale_reports_a_level() {
    let dir = scratch("merge");
    let a = generate_circle(&dir, "a.json", 1.0);
    let b = generate_circle(&dir, "b.json", 1.5);
    let top = 3.0 * PI / (PI / 64.0).cos();
    let v = json(&run(&[
        "merge-scale", &a, &b, "--lo", &format!("{}", 0.5 * top), "--hi", &format!("{}", 2.0 * top), "--keyframes", "8",
        "--time-samples", "16",
    ]));
    let m = v["merge_scale_upper"].as_f64().unwrap();
    assert!(m >= top * 0.99 && m <= 2.0 * top, "{m}");
}

#[test]
fn diagram_graph_and_distance() {
    let dir = scratch("graph");
    let k = trefoil_polygon(48, 1.0).unwrap();
    let kp = write(&dir, "k.json", &k);
    let d = json(&run(&["diagram", &kp, "--u", "0.013", "-0.021", "1"]));
    let code = d["gauss_code"].as_str().unwrap().to_string();
    assert_eq!(d["crossings"].as_array().unwrap().len(), 3);

    let grow = IsotopyPath::linear(k.clone(), k.scaled(1.2)).unwrap();
    let gp = write(&dir, "grow.json", &grow);
    let g = run(&["graph", &gp, "--u", "0.013", "-0.021", "1", "--time-samples", "40"]);
    let gv = json(&g);
    assert_eq!(gv["nodes"].as_array().unwrap().len(), 1);
    let graph = dir.join("g.json");
    std::fs::write(&graph, &g.stdout).unwrap();
    let graph = graph.to_str().unwrap();

    let dist = json(&run(&["ddist", graph, &code, &code]));
    assert_eq!(dist["distance"], 0.0);
    assert_eq!(run(&["ddist", graph, &code, "empty"]).status.code(), Some(2));
}
