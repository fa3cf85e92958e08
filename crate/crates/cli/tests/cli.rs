// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! The `tomo` binary end to end.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tomo_cli::io::parse_tomogram_csv;
use tomo_cli::json::fmt_f64;
use tomo_core::basis::DensityMatrix;
use tomo_core::channels::ChannelSpec;
use tomo_core::tomography::{dequantizer_element, quantizer_element, tomogram_from_density, tomogram_from_hermitian, RayGrid, ReconstructionParams};

fn tomo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tomo")).args(args).output().expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn state_files() {
    let out = tomo(&["state", "mixture", "0.5", "fock0", "0.5", "fock1", "--dim", "2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let data: Vec<f64> = v["data"].as_array().unwrap().iter().map(|e| e[0].as_f64().unwrap()).collect();
    assert_eq!(data, vec![0.5, 0.0, 0.0, 0.5]);

    let out = tomo(&["state", "thermal", "1.0", "--dim", "16"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let trace: f64 = (0..16).map(|i| v["data"][i * 17][0].as_f64().unwrap()).sum();
    assert!((trace - 1.0).abs() < 1e-11);
    // geometric series: weight beyond 16 levels is 2^-16
    assert!((v["leakage"].as_f64().unwrap() - 0.5f64.powi(16)).abs() < 1e-15);
}

#[test]
fn fock_zero_tomogram_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "f0.csv");
    assert!(tomo(&["tomogram", "fock", "0", "--reconstruct", "--out", &out]).status.success());
    let (header, rows) = parse_tomogram_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(header.iter().any(|(k, _)| k == "config_hash"));
    let worst = rows.iter().map(|r| (r[2] - (-r[1] * r[1]).exp() / PI.sqrt()).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst:e}");
    let grid = RayGrid::default();
    for (j, ray) in rows.chunks(grid.n_x()).enumerate() {
        let sum: f64 = ray.iter().enumerate().map(|(i, r)| grid.x_weight(i) * r[2]).sum();
        assert!((sum - 1.0).abs() <= 1e-6, "ray {j}: {sum}");
    }
    let summary = json(Path::new(&format!("{out}.summary.json")));
    assert!(summary["values"]["fidelity"].as_f64().unwrap() >= 1.0 - 1e-6);
    assert_eq!(summary["pass"], Value::Bool(true));
}

#[test]
fn channel_both_routes_and_report_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let state = p(dir.path(), "rho.json");
    assert!(tomo(&["state", "coherent", "0.4", "-0.3", "--dim", "2", "--out", &state]).status.success());
    let prefix = p(dir.path(), "pf");
    let out = tomo(&["channel", "phase-flip", "0.5", "--method", "both", "--state", &state, "--out", &prefix]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(Path::new(&format!("{prefix}.report.json")));
    let check = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "tomographic vs oracle").unwrap();
    let reported = check["value"].as_f64().unwrap();
    assert!(reported <= 1e-5);

    // the same numbers recomputed through the library
    let (rho, _) = tomo_cli::io::read_density(Path::new(&state)).unwrap();
    let grid = RayGrid::default();
    let spec = ChannelSpec::PhaseFlip { p: 0.5 };
    let t = tomogram_from_density(&rho, &grid).unwrap();
    let a = spec.apply(&t, 2, &ReconstructionParams::default()).unwrap();
    let b = tomogram_from_hermitian(&spec.oracle(&rho).unwrap(), &grid).unwrap();
    assert_eq!(fmt_f64(reported), fmt_f64(a.max_abs_diff(&b)));
    assert_eq!(fmt_f64(check["l2"].as_f64().unwrap()), fmt_f64(a.l2_diff(&b)));
    assert_eq!(report["config_hash"].as_str().unwrap().len(), 64);
    assert!(report["tolerances"]["oracle_qubit"].is_number());
}

#[test]
fn total_amplitude_damping_gives_vacuum() {
    let out = tomo(&["channel", "amp-damp", "1.0", "--input", "fock1"]);
    assert!(out.status.success());
    let (_, rows) = parse_tomogram_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let worst = rows.iter().map(|r| (r[2] - (-r[1] * r[1]).exp() / PI.sqrt()).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-10, "{worst:e}");
}

#[test]
fn selective_gaussian_position_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = p(dir.path(), "gp");
    let out = tomo(&[
        "channel", "gauss-pos", "1.0", "--selective", "a=0.5", "--method", "both", "--input", "fock1", "--dim", "3",
        "--nx", "129", "--ntheta", "16", "--out", &prefix,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(Path::new(&format!("{prefix}.report.json")));
    let prob = report["values"]["tomographic_probability"].as_f64().unwrap();
    // <1|Π_a²|1> for a Gaussian of width κ on |ψ_1|²
    let oracle = report["values"]["oracle_trace"].as_f64().unwrap();
    assert!((prob - oracle).abs() <= 1e-5, "{prob} vs {oracle}");
    assert!(report["pass"].as_bool().unwrap());
    let csv = std::fs::read_to_string(format!("{prefix}.tomographic.csv")).unwrap();
    assert!(csv.contains("# kind=density"));
    assert!(csv.contains("# selective_outcome=5.000000000000e-1"));
}

#[test]
fn kernel_exports() {
    let dir = tempfile::tempdir().unwrap();
    let pf = p(dir.path(), "pf");
    assert!(tomo(&["kernel", "phase-flip", "0.3", "--out", &pf]).status.success());
    let v = json(Path::new(&format!("{pf}.kernel.json")));
    assert!((v["summary"]["identity_weight"].as_f64().unwrap() - 0.3).abs() < 1e-12);
    assert_eq!(v["summary"]["kind"], "generalized");
    assert_eq!(v["tensor"].as_array().unwrap().len(), 16);
    assert!(!Path::new(&format!("{pf}.dense.csv")).exists());

    let id = p(dir.path(), "id");
    assert!(tomo(&["kernel", "identity", "--out", &id]).status.success());
    let v = json(Path::new(&format!("{id}.kernel.json")));
    assert!((v["summary"]["identity_weight"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["dense_grid"].is_null());
    assert!(!Path::new(&format!("{id}.dense.csv")).exists());

    let bp = p(dir.path(), "bp");
    assert!(tomo(&["kernel", "basis-proj", "0", "--dim", "2", "--out", &bp]).status.success());
    let text = std::fs::read_to_string(format!("{bp}.dense.csv")).unwrap();
    let mut rows = 0;
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("Xbar")) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let expect = quantizer_element(0, 0, f[0], f[1].cos(), f[1].sin()) * dequantizer_element(0, 0, f[2], f[3]);
        assert!((f[4] - expect.re).abs() < 1e-11 && (f[5] - expect.im).abs() < 1e-11, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 36 * 36);

    let vp = p(dir.path(), "vp");
    assert!(tomo(&["kernel", "vn-pointer", "g=1", "a=-1,1", "w=0.4,0.6", "--out", &vp]).status.success());
    let v = json(Path::new(&format!("{vp}.kernel.json")));
    assert!(v["tensor"].is_null());
    assert_eq!(v["summary"]["structural"]["type"], "shift_mixture");
}

#[test]
fn deliberate_completeness_violation_fails() {
    let ok = tomo(&["verify", "completeness", "phase-flip", "0.3"]);
    assert!(ok.status.success());
    let bad = tomo(&["verify", "completeness", "phase-flip", "0.3", "--drop-kraus", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert!(v["checks"][0]["value"].as_f64().unwrap() > 0.05);
    let err = String::from_utf8(bad.stderr).unwrap();
    assert!(err.lines().any(|l| l.starts_with("error code=check-failed msg=\"")));
    // a window of a continuous family
    let w = tomo(&["verify", "completeness", "gauss-proj", "1.0", "--drop-window", "1"]);
    assert_eq!(w.status.code(), Some(1));
}

#[test]
fn error_paths_have_codes_and_one_line() {
    let cases: [(&[&str], i32, &str); 7] = [
        (&["channel", "nosuch"], 2, "usage"),
        (&["state", "squeezed", "1"], 2, "usage"),
        (&["frobnicate"], 2, "usage"),
        (&["state", "fock", "20", "--dim", "4"], 3, "validation"),
        (&["tomogram", "fock", "0", "--nx", "4"], 3, "validation"),
        (&["channel", "phase-flip", "0.5", "--dim", "3"], 3, "validation"),
        (&["verify", "nosuch"], 2, "usage"),
    ];
    for (args, code, name) in cases {
        let out = tomo(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        let lines: Vec<&str> = err.lines().filter(|l| l.starts_with("error ")).collect();
        assert_eq!(lines.len(), 1, "{args:?}: {err}");
        assert!(lines[0].starts_with(&format!("error code={name} msg=\"")), "{}", lines[0]);
    }
    let missing = tomo(&["tomogram", "--state", "/nonexistent/rho.json"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn tomogram_is_deterministic_and_reads_state_files() {
    let dir = tempfile::tempdir().unwrap();
    let state = p(dir.path(), "rho.json");
    assert!(tomo(&["state", "coherent", "0.3", "0.1", "--dim", "6", "--out", &state]).status.success());
    let a = tomo(&["tomogram", "--state", &state, "--nx", "33", "--ntheta", "8"]);
    let b = tomo(&["tomogram", "--state", &state, "--nx", "33", "--ntheta", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (rho, _) = tomo_cli::io::read_density(Path::new(&state)).unwrap();
    assert_eq!(rho.dim(), 6);
    let mut vacuum = [tomo_core::C64::new(0.0, 0.0); 6];
    vacuum[0] = tomo_core::C64::new(1.0, 0.0);
    // |<0|alpha>|² = e^{-|alpha|²}, up to the truncation renormalisation
    let f = rho.fidelity(&DensityMatrix::pure(&vacuum).unwrap());
    assert!((f - (-0.1f64).exp()).abs() < 1e-6, "{f}");
}
