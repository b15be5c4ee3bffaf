use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use srvreg::cli::{DistanceReport, LocalMaxReport};
use srvreg::io::{read_grid_binary, read_path_csv, GeodesicManifest};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn srvreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srvreg"))
        .args(args)
        .env_remove("SRVREG_THREADS")
        .output()
        .unwrap()
}

fn distance(c1: &str, c2: &str, extra: &[&str]) -> DistanceReport {
    let (a, b) = (data(c1), data(c2));
    let mut args = vec!["distance", a.to_str().unwrap(), b.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = srvreg(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn identical_segments_have_zero_distance() {
    let r = distance("segment.csv", "segment.csv", &[]);
    assert_eq!(r.scheme, "vinf");
    assert_eq!(r.n, 320);
    assert!(r.distance_from_j <= 1e-6);
}

#[test]
fn perpendicular_segments_approach_right_angle() {
    let d: Vec<f64> = ["10", "40", "160"]
        .iter()
        .map(|n| distance("segment.csv", "perpendicular_segment.csv", &["--grid-n", n]).distance_from_u)
        .collect();
    for x in &d {
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-9, "{d:?}");
    }
}

#[test]
fn json_is_deterministic_apart_from_timing() {
    let strip = |mut r: DistanceReport| {
        r.wall_ms = 0.0;
        serde_json::to_string(&r).unwrap()
    };
    let args = ["--grid-n", "64", "--scheme", "filtered-v"];
    let a = strip(distance("semicircle.csv", "s_curve.csv", &args));
    let b = strip(distance("semicircle.csv", "s_curve.csv", &args));
    assert_eq!(a, b);
    let threaded = strip(distance("semicircle.csv", "s_curve.csv", &[&args[..], &["--threads", "3"]].concat()));
    assert_eq!(a, threaded);
}

#[test]
fn input_errors_exit_two() {
    let seg = data("segment.csv");
    let seg = seg.to_str().unwrap();
    let out = srvreg(&["distance", "/nonexistent/curve.csv", seg]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "# header comment\n0,0\n0.5,0\n1,x\n").unwrap();
    let out = srvreg(&["distance", bad.to_str().unwrap(), seg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.csv:4:"));

    let repeated = dir.path().join("repeated.csv");
    std::fs::write(&repeated, "0,0\n0,0\n1,0\n").unwrap();
    assert_eq!(srvreg(&["distance", repeated.to_str().unwrap(), seg]).status.code(), Some(2));
}

#[test]
fn config_errors_exit_four() {
    let seg = data("segment.csv");
    let seg = seg.to_str().unwrap();
    assert_eq!(srvreg(&["distance", seg, seg, "--grid-n", "1"]).status.code(), Some(4));
    assert_eq!(srvreg(&["distance", seg, seg, "--scheme", "bogus"]).status.code(), Some(4));
    assert_eq!(srvreg(&["distance", seg, seg, "--filter-k", "-1"]).status.code(), Some(4));
    assert_eq!(srvreg(&["converge", seg, seg, "--n-list", "30", "--reference-n", "40"]).status.code(), Some(4));
}

#[test]
fn leading_t_column() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("t.csv");
    std::fs::write(&c, "t,x,y\n0,0,0\n0.3,0.3,0\n1,1,0\n").unwrap();
    let c = c.to_str().unwrap();
    let out = srvreg(&["distance", c, c, "--t-column", "--grid-n", "20"]);
    assert_eq!(out.status.code(), Some(0));
    // without the flag the header is skipped and `t` becomes a coordinate
    let out = srvreg(&["distance", c, c, "--grid-n", "20"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn register_writes_valid_path() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("path.csv");
    let (a, b) = (data("semicircle.csv"), data("s_curve.csv"));
    let out = srvreg(&[
        "register",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--grid-n",
        "40",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let path = read_path_csv(&out_path).unwrap();
    assert!(path.points().len() <= 81);
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("t,phi1,phi2\n0,0,0\n"));
    assert!(text.trim_end().ends_with(",1,1"));
}

#[test]
fn geodesic_writes_tau_files_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (data("semicircle.csv"), data("s_curve.csv"));
    let out = srvreg(&[
        "geodesic",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--grid-n",
        "40",
        "--tau",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: GeodesicManifest =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.tau.len(), 7);
    assert_eq!(manifest.files.len(), 7);
    for f in &manifest.files {
        let text = std::fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(text.starts_with("t,x1,x2\n"));
    }
    let stdout: GeodesicManifest = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stdout, manifest);
}

#[test]
fn converge_writes_two_rows_per_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let (a, b) = (data("semicircle_psi1.csv"), data("semicircle_psi2.csv"));
    let out = srvreg(&[
        "converge",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--n-list",
        "20,40",
        "--reference-n",
        "80",
        "--schemes",
        "u1,vinf,ddp",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["scheme", "N", "wall_time", "linf_u_error", "dist_u_error", "dist_J_error", "geodesic_error_bound"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    for scheme in ["u1", "vinf", "ddp"] {
        assert_eq!(rows.iter().filter(|r| &r[0] == scheme).count(), 2);
    }
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["reference_n"], 80);
}

#[test]
fn localmax_on_unit_forcing_sits_on_diagonal() {
    let seg = data("segment.csv");
    let seg = seg.to_str().unwrap();
    let out = srvreg(&["localmax", seg, seg, "--grid-n", "40", "--scheme", "u1"]);
    assert_eq!(out.status.code(), Some(0));
    let report: LocalMaxReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report.maxima.is_empty());
    for m in &report.maxima {
        assert!((m.x1 - m.x2).abs() <= 2.0 / 40.0);
    }
}

#[test]
fn dump_grid_formats() {
    let dir = tempfile::tempdir().unwrap();
    let seg = data("segment.csv");
    let seg = seg.to_str().unwrap();
    let bin = dir.path().join("u.bin");
    let csv_path = dir.path().join("u.csv");
    for dump in [&bin, &csv_path] {
        let out = srvreg(&["distance", seg, seg, "--grid-n", "16", "--scheme", "v1", "--dump-grid", dump.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let field = read_grid_binary(std::fs::File::open(&bin).unwrap()).unwrap();
    assert_eq!(field.n(), 16);
    assert!((field.u_at_one() - 1.0).abs() < 1e-12);
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(text.lines().next(), Some("i,j,u,alpha1,alpha2"));
    assert_eq!(text.lines().count(), 1 + 17 * 17);
}

#[test]
fn thread_count_from_environment() {
    let seg = data("segment.csv");
    let seg = seg.to_str().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_srvreg"))
        .args(["distance", seg, seg, "--grid-n", "32"])
        .env("SRVREG_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_srvreg"))
        .args(["distance", seg, seg, "--grid-n", "32"])
        .env("SRVREG_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(4));
}
