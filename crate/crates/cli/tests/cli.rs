use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use isoprim_core::harness::{write_nodes, NodeRole, NodeSet, NodeSource};
use isoprim_core::Point3;
use serde_json::Value;

fn isoprim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoprim"))
        .args(args)
        .output()
        .unwrap()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn config(name: &str) -> String {
    configs().join(name).display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn error_json(out: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn nodes(points: &[[f64; 3]]) -> NodeSet {
    let pts = points
        .iter()
        .map(|p| Point3::new(p[0], p[1], p[2]))
        .collect();
    NodeSet::numbered(pts, NodeRole::Deformed, NodeSource::Fem)
}

#[test]
fn compare_matches_hand_sum() {
    let dir = tempfile::tempdir().unwrap();
    let o: Vec<[f64; 3]> = (0..10).map(|i| [i as f64, 0.0, 0.0]).collect();
    let a: Vec<[f64; 3]> = o.iter().map(|p| [p[0], 2.0, 0.0]).collect();
    let f: Vec<[f64; 3]> = o
        .iter()
        .enumerate()
        .map(|(i, p)| [p[0], 2.0, if i < 5 { 1.0 } else { 0.0 }])
        .collect();
    // Σ|a − f|² = 5, Σ|a − o|² = 40
    let want = (5.0f64 / 40.0).sqrt();
    let path = |n: &str| dir.path().join(n);
    write_nodes(&path("o.csv"), &nodes(&o)).unwrap();
    write_nodes(&path("a.csv"), &nodes(&a)).unwrap();
    write_nodes(&path("f.csv"), &nodes(&f)).unwrap();
    let report = path("report.csv");
    let out = isoprim(&[
        "compare",
        path("f.csv").to_str().unwrap(),
        path("a.csv").to_str().unwrap(),
        path("o.csv").to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let line = stdout(&out)
        .lines()
        .find(|l| l.starts_with("E = "))
        .unwrap()
        .to_string();
    let e: f64 = line.trim_start_matches("E = ").parse().unwrap();
    assert!((e - want).abs() < 1e-15, "{e} vs {want}");
    let report = fs::read_to_string(report).unwrap();
    assert_eq!(report.lines().next(), Some("id,e,d"));
    assert_eq!(report.lines().count(), 11);
}

#[test]
fn missing_header_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.csv", "id,x,y,z\n1,0,0,0\n");
    let bad = write(dir.path(), "bad.csv", "1,0,0,1\n");
    let out = isoprim(&["compare", &good, &bad, &good]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"], "ParseError");
}

#[test]
fn block_solve_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = isoprim(&[
        "solve",
        &config("block.toml"),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "ok");
    assert!(manifest["residual"].as_f64().unwrap() < 1e-6);
    assert!(manifest["pose_error"].as_f64().unwrap() < 1e-6);
    assert_eq!(manifest["params"].as_array().unwrap().len(), 9);
    for f in ["params.csv", "trace.csv", "points.csv"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
}

#[test]
fn every_example_config_solves() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["chamber.toml", "rod2d.toml", "rod3d.toml"] {
        let out_dir = dir.path().join(name);
        let out = isoprim(&["solve", &config(name), "--out", out_dir.to_str().unwrap()]);
        assert!(
            out.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn seed_makes_fitted_solve_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(configs().join("block.toml")).unwrap();
    let cfg = write(
        dir.path(),
        "fit.toml",
        &text.replace("seed = 1", "seed = 1\nfloor = 1e-6\nsamples = 200"),
    );
    let mut points = Vec::new();
    for run in ["a", "b"] {
        let out_dir = dir.path().join(run);
        let out = isoprim(&[
            "solve",
            &cfg,
            "--weights",
            "fit",
            "--seed",
            "5",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        points.push(fs::read(out_dir.join("points.csv")).unwrap());
    }
    assert_eq!(points[0], points[1]);
}

#[test]
fn bend_before_shear_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "case = \"block\"\n[modes]\nstages = [\"twist\", \"bend2d\", \"shear\"]\n[targets]\ndisplacement = [0.1, 0, 0]\n",
    );
    let out_dir = dir.path().join("out");
    let out = isoprim(&["solve", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"], "OrderViolation");
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "error");
}

#[test]
fn too_few_fit_samples_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(configs().join("block.toml")).unwrap();
    let cfg = write(
        dir.path(),
        "few.toml",
        &text.replace("seed = 1", "seed = 1\nsamples = 10"),
    );
    let out = isoprim(&[
        "fit-weights",
        &cfg,
        "--out",
        dir.path().join("w.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unfloored_block_weights_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.csv");
    let out = isoprim(&[
        "fit-weights",
        &config("block.toml"),
        "--out",
        w.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("indefinite"));
    let out_dir = dir.path().join("out");
    let out = isoprim(&[
        "solve",
        &config("block.toml"),
        "--weights",
        w.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_json(&out)["error"], "NotPositiveDefinite");
}

fn energy_of(cfg: &str, params: &str) -> f64 {
    let out = isoprim(&["energy", cfg, params]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("energy")).unwrap();
    line.split_whitespace().last().unwrap().parse().unwrap()
}

#[test]
fn energy_of_zero_params_is_zero_and_scales_with_material() {
    let dir = tempfile::tempdir().unwrap();
    let names = [
        "twist.1",
        "elongation.1",
        "shear.1",
        "shear.2",
        "bend2d.1",
        "bend2d.2",
        "bend2d.3",
        "bend2d.4",
        "bend2d.ro",
    ];
    let params = |p: &[f64]| {
        let mut s = String::from("index,name,value\n");
        for (i, (n, v)) in names.iter().zip(p).enumerate() {
            s += &format!("{i},{n},{v}\n");
        }
        s
    };
    let zero = write(dir.path(), "zero.csv", &params(&[0.0; 9]));
    assert_eq!(energy_of(&config("block.toml"), &zero), 0.0);

    let p = write(
        dir.path(),
        "p.csv",
        &params(&[0.02, 0.0, 0.03, 0.0, 0.02, 0.0, 0.0, 0.0, 0.0]),
    );
    let base = fs::read_to_string(configs().join("block.toml")).unwrap();
    let with = |name: &str, body: &str| {
        write(
            dir.path(),
            name,
            &base.replace("name = \"ecoflex-00-30\"", body),
        )
    };
    let c10 = energy_of(&with("c10.toml", "c10 = 1.0\nc01 = 0.0"), &p);
    let c01 = energy_of(&with("c01.toml", "c10 = 0.0\nc01 = 1.0"), &p);
    let eco = energy_of(&config("block.toml"), &p);
    let dragon = energy_of(&with("ds.toml", "name = \"dragonskin-30\""), &p);
    assert!((eco - (5.6 * c10 + 6.3 * c01)).abs() < 1e-9 * eco);
    assert!((dragon - (1.19 * c10 + 23.028 * c01)).abs() < 1e-9 * dragon);
}

#[test]
fn export_writes_obj_faces() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.csv", "index,name,value\n0,source.1,0.1\n1,source.2,0\n2,source.3,0\n3,source.4,0\n4,source.5,0\n");
    let obj = dir.path().join("c.obj");
    let out = isoprim(&[
        "export",
        &config("chamber.toml"),
        &zero,
        "--out",
        obj.to_str().unwrap(),
        "--format",
        "obj",
        "--surface-grid",
        "8",
        "4",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 32);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 7 * 3);
}
