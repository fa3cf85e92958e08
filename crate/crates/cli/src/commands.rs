// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! `state`, `tomogram`, `channel` and `kernel`. Each returns the text for
//! stdout; files are written only when `--out` is given.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use tomo_core::basis::{make_state, DensityMatrix, HilbertSpec, StateKind};
use tomo_core::channels::{ChannelSpec, GaussianPositionChannel, SelectiveRoute, CHANNEL_NAMES};
use tomo_core::kernels::{KernelSummary, ProcessKernel};
use tomo_core::tomography::{
    density_from_tomogram, tomogram_from_density, tomogram_from_hermitian, RayGrid, RayGridParams,
};
use tomo_core::{tolerances, TomoError};

use crate::config::{Flags, Method, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{self, read_density, sidecar, tomogram_csv, write_file, DensityFile};
use crate::json::{self, fmt_f64};
use crate::report::{Check, ComparisonReport, Runtimes};
use crate::states::{parse_compact, parse_descriptor};

/// Default dimension of oscillator channels and states.
pub const DEFAULT_DIM: usize = 16;
/// Coarse grid of the dense kernel view.
pub const KERNEL_GRID: RayGridParams = RayGridParams { x_max: 4.0, n_x: 9, n_theta: 4 };
/// Extra levels kept by oracles of channels that heat the state.
pub const ORACLE_EXTRA_LEVELS: usize = 30;

fn prepare(kind: &StateKind, dim: usize) -> CliResult<(DensityMatrix, f64)> {
    // make_state logs leakage above the warning threshold
    let p = make_state(&HilbertSpec::new(dim)?, kind)?;
    Ok((p.density, p.leakage))
}

pub fn cmd_state(tokens: &[String], flags: &Flags) -> CliResult<String> {
    let kind = parse_descriptor(tokens)?;
    let mut cfg = RunConfig::new("state", tokens.to_vec(), flags, RayGridParams::default())?;
    cfg.state = Some(kind.clone());
    let (rho, leakage) = prepare(&kind, cfg.dim_or(DEFAULT_DIM))?;
    let text = DensityFile::new(rho.matrix(), leakage, Some(kind)).to_json()?;
    emit(cfg.out.as_deref(), "", text)
}

fn emit(out: Option<&Path>, suffix: &str, text: String) -> CliResult<String> {
    match out {
        Some(path) => {
            write_file(&io::sidecar(path, suffix), &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Input state from `--state FILE` or a descriptor, with its dimension.
fn load_state(cfg: &mut RunConfig, file: Option<&Path>, kind: Option<StateKind>, default_dim: usize) -> CliResult<DensityMatrix> {
    match (file, kind) {
        (Some(_), Some(_)) => Err(CliError::usage("give either --state or a state descriptor, not both")),
        (Some(path), None) => {
            let (rho, sha) = read_density(path)?;
            if let Some(d) = cfg.dim.filter(|&d| d != rho.dim()) {
                return Err(TomoError::validation(format!("--dim {d} but the state file has dimension {}", rho.dim())).into());
            }
            cfg.dim = Some(rho.dim());
            cfg.state_file_sha256 = Some(sha);
            Ok(rho)
        }
        (None, Some(kind)) => {
            let dim = cfg.dim_or(default_dim);
            cfg.dim = Some(dim);
            cfg.state = Some(kind.clone());
            Ok(prepare(&kind, dim)?.0)
        }
        (None, None) => Err(CliError::usage("missing input state")),
    }
}

pub fn cmd_tomogram(tokens: &[String], state: Option<&Path>, reconstruct: bool, flags: &Flags) -> CliResult<String> {
    let kind = if tokens.is_empty() { None } else { Some(parse_descriptor(tokens)?) };
    let mut cfg = RunConfig::new("tomogram", tokens.to_vec(), flags, RayGridParams::default())?;
    cfg.reconstruct = reconstruct;
    let rho = load_state(&mut cfg, state, kind, DEFAULT_DIM)?;
    let grid = cfg.ray_grid()?;
    let t = tomogram_from_density(&rho, &grid)?;

    let mut summary = ComparisonReport::new("tomogram", &cfg);
    summary.value("dim", rho.dim() as f64);
    summary.value("normalization_drift", t.normalization_drift());
    summary.value("min_value", t.min_value());
    summary.value("purity", rho.purity());
    if reconstruct {
        let rec = density_from_tomogram(&t, &HilbertSpec::new(rho.dim())?, &cfg.reconstruction)?;
        let fidelity = rho.fidelity(&rec.density);
        summary.value("fidelity", fidelity);
        summary.value("hermiticity_residual", rec.hermiticity_residual);
        summary.push(Check::at_most("round-trip infidelity", 1.0 - fidelity, cfg.tolerances.round_trip_infidelity));
    }
    let csv = tomogram_csv(&t, &[("dim".into(), rho.dim().to_string()), ("config_hash".into(), summary.config_hash.clone())]);
    let stdout = match cfg.out.as_deref() {
        Some(out) => {
            write_file(out, &csv)?;
            write_file(&sidecar(out, ".summary.json"), &summary.to_json()?)?;
            String::new()
        }
        None => {
            eprint!("{}", summary.to_json()?);
            csv
        }
    };
    finish(&summary, stdout)
}

fn finish(report: &ComparisonReport, stdout: String) -> CliResult<String> {
    if report.pass {
        Ok(stdout)
    } else {
        print!("{stdout}");
        let names: Vec<&str> = report.failures().iter().map(|c| c.name.as_str()).collect();
        Err(CliError::CheckFailed(format!("failed checks: {}", names.join("; "))))
    }
}

/// Positional parameters of each channel, in order.
fn positional_keys(name: &str) -> &'static [&'static str] {
    match name {
        "phase-flip" => &["p"],
        "amp-damp" => &["gamma"],
        "basis-proj" => &["m"],
        "gauss-proj" | "gauss-pos" => &["kappa"],
        "von-neumann" => &["g", "kappa"],
        "vn-pointer" => &["g"],
        _ => &[],
    }
}

/// `name [VALUE ...] [key=value ...]`.
pub fn parse_channel(name: &str, params: &[String]) -> CliResult<ChannelSpec> {
    if !CHANNEL_NAMES.contains(&name) {
        return Err(CliError::usage(format!("unknown channel '{name}'; known: {}", CHANNEL_NAMES.join(", "))));
    }
    let keys = positional_keys(name);
    let mut pairs = Vec::new();
    let mut next = 0;
    for p in params {
        match p.split_once('=') {
            Some((k, v)) => pairs.push((k.to_string(), v.to_string())),
            None => {
                let key = keys
                    .get(next)
                    .ok_or_else(|| CliError::usage(format!("channel '{name}' takes {} positional parameter(s)", keys.len())))?;
                pairs.push((key.to_string(), p.clone()));
                next += 1;
            }
        }
    }
    Ok(ChannelSpec::parse(name, &pairs)?)
}

fn is_qubit(spec: &ChannelSpec) -> bool {
    matches!(spec, ChannelSpec::PhaseFlip { .. } | ChannelSpec::AmpDamp { .. })
}

pub struct ChannelArgs<'a> {
    pub name: &'a str,
    pub params: &'a [String],
    pub state: Option<&'a Path>,
    pub input: Option<&'a str>,
    pub selective: Option<&'a str>,
}

fn parse_selective(s: &str) -> CliResult<f64> {
    let v = s.strip_prefix("a=").unwrap_or(s);
    v.parse().map_err(|_| CliError::usage(format!("--selective expects a=VALUE, got '{s}'")))
}

pub fn cmd_channel(args: &ChannelArgs, flags: &Flags) -> CliResult<String> {
    let spec = parse_channel(args.name, args.params)?;
    let mut argv = vec![args.name.to_string()];
    argv.extend(args.params.iter().cloned());
    let mut cfg = RunConfig::new("channel", argv, flags, RayGridParams::default())?;
    let method = cfg.method.unwrap_or(Method::Tomographic);
    cfg.method = Some(method);
    cfg.selective = args.selective.map(parse_selective).transpose()?;
    let gauss = match (&spec, cfg.selective) {
        (ChannelSpec::GaussPos { kappa }, _) => Some(GaussianPositionChannel::new(*kappa)?),
        (_, Some(_)) => return Err(CliError::usage("--selective applies to gauss-pos only")),
        _ => None,
    };
    cfg.channel = Some(spec.clone());
    let default_input = if matches!(spec, ChannelSpec::VnPointer { .. }) { "fock0" } else { "coherent:0.5:0.3" };
    let kind = match (args.state, args.input) {
        (Some(_), _) => None,
        (None, Some(s)) => Some(parse_descriptor(&s.split_whitespace().map(String::from).collect::<Vec<_>>())?),
        (None, None) => Some(parse_compact(default_input)?),
    };
    let default_dim = if is_qubit(&spec) { 2 } else { DEFAULT_DIM };
    let rho = load_state(&mut cfg, args.state, kind, default_dim)?;
    let dim = rho.dim();
    let grid = cfg.ray_grid()?;
    let params = cfg.reconstruction;
    let mut report = ComparisonReport::new("channel", &cfg);
    let mut runtimes = Runtimes::default();

    let t = tomogram_from_density(&rho, &grid)?;
    let tomographic = if method != Method::Oracle {
        let start = Instant::now();
        let out = match (&gauss, cfg.selective) {
            (Some(ch), Some(a)) => ch
                .selective_densities(&t, &[a], dim, &params, &SelectiveRoute::default())?
                .pop()
                .expect("one outcome"),
            _ => spec.apply(&t, dim, &params)?,
        };
        runtimes.record("tomographic", start.elapsed().as_secs_f64());
        Some(out)
    } else {
        None
    };
    let oracle = if method != Method::Tomographic {
        let start = Instant::now();
        let op = match (&gauss, cfg.selective) {
            (Some(ch), Some(a)) => ch.selective_oracle(&rho, a, dim + ORACLE_EXTRA_LEVELS)?,
            _ => spec.oracle(&rho)?,
        };
        report.value("oracle_trace", op.trace().re);
        let out = tomogram_from_hermitian(&op, &grid)?;
        runtimes.record("oracle", start.elapsed().as_secs_f64());
        Some(out)
    } else {
        None
    };

    let selective = spec.is_selective() || cfg.selective.is_some();
    for (label, out) in [("tomographic", &tomographic), ("oracle", &oracle)] {
        if let Some(out) = out {
            let norms = out.normalizations();
            let mean = norms.iter().sum::<f64>() / norms.len() as f64;
            if selective {
                report.value(format!("{label}_probability"), mean);
            } else {
                report.push(Check::at_most(
                    format!("{label} normalization drift"),
                    out.normalization_drift(),
                    tolerances::GRID_NORMALIZATION,
                ));
            }
        }
    }
    if let (Some(a), Some(b)) = (&tomographic, &oracle) {
        let tol = &cfg.tolerances;
        let limit = match spec {
            ChannelSpec::GaussPos { .. } => tol.blur_oracle,
            _ if dim == 2 => tol.oracle_qubit,
            _ => tol.oracle_oscillator,
        };
        report.push(Check::tomograms("tomographic vs oracle", a, b, limit));
    }

    let header = |route: &str| {
        let mut h = vec![
            ("channel".to_string(), spec.to_string()),
            ("route".to_string(), route.to_string()),
            ("dim".to_string(), dim.to_string()),
            ("config_hash".to_string(), report.config_hash.clone()),
        ];
        if let Some(a) = cfg.selective {
            h.push(("selective_outcome".into(), fmt_f64(a)));
        }
        if selective {
            h.push(("kind".into(), "density".into()));
        }
        h
    };
    let stdout = match cfg.out.as_deref() {
        Some(out) => {
            if let Some(a) = &tomographic {
                write_file(&sidecar(out, ".tomographic.csv"), &tomogram_csv(a, &header("tomographic")))?;
            }
            if let Some(b) = &oracle {
                write_file(&sidecar(out, ".oracle.csv"), &tomogram_csv(b, &header("oracle")))?;
            }
            write_file(&sidecar(out, ".report.json"), &report.to_json()?)?;
            write_file(&sidecar(out, ".runtime.json"), &json::to_pretty(&runtimes)?)?;
            String::new()
        }
        None => match (&tomographic, &oracle) {
            (Some(_), Some(_)) => report.to_json()?,
            (Some(a), None) => tomogram_csv(a, &header("tomographic")),
            (None, Some(b)) => tomogram_csv(b, &header("oracle")),
            (None, None) => unreachable!("a method always selects a route"),
        },
    };
    finish(&report, stdout)
}

pub const KERNEL_FORMAT: &str = "tomo-kernel/1";

#[derive(Serialize)]
struct KernelExport {
    format: &'static str,
    config_hash: String,
    channel: ChannelSpec,
    summary: KernelSummary,
    /// Index of the coefficient multiplying `D_jk(x̄) U_li(x)`.
    layout: &'static str,
    tensor: Option<Vec<[f64; 2]>>,
    dense_grid: Option<RayGridParams>,
}

fn dense_csv(kernel: &ProcessKernel, grid: &RayGrid) -> CliResult<String> {
    let mut s = String::new();
    let _ = writeln!(s, "# tomo kernel dense view");
    let _ = writeln!(s, "# kernel={}", kernel.name);
    let _ = writeln!(s, "# x_max={}", fmt_f64(grid.x_max()));
    let _ = writeln!(s, "# n_x={}", grid.n_x());
    let _ = writeln!(s, "# n_theta={}", grid.n_theta());
    s.push_str("Xbar,thetabar,X,theta,re,im\n");
    let points: Vec<(f64, f64)> =
        grid.theta_nodes().iter().flat_map(|&th| grid.x_nodes().iter().map(move |&x| (x, th))).collect();
    for &(xb, tb) in &points {
        for &(x, th) in &points {
            let v = kernel.evaluate([xb, tb.cos(), tb.sin()], [x, th.cos(), th.sin()])?;
            let _ = writeln!(s, "{},{},{},{},{},{}", fmt_f64(xb), fmt_f64(tb), fmt_f64(x), fmt_f64(th), fmt_f64(v.re), fmt_f64(v.im));
        }
    }
    Ok(s)
}

pub fn cmd_kernel(name: &str, params: &[String], flags: &Flags) -> CliResult<String> {
    let spec = parse_channel(name, params)?;
    let mut argv = vec![name.to_string()];
    argv.extend(params.iter().cloned());
    let mut cfg = RunConfig::new("kernel", argv, flags, KERNEL_GRID)?;
    let dim = cfg.dim_or(if is_qubit(&spec) { 2 } else { 4 });
    cfg.dim = Some(dim);
    cfg.channel = Some(spec.clone());
    let kernel = spec.kernel(dim)?;
    let summary = kernel.summary();
    let dense = kernel.tensor().is_some() && summary.kind == tomo_core::tomography::SymbolKind::Regular;
    let export = KernelExport {
        format: KERNEL_FORMAT,
        config_hash: cfg.hash(),
        channel: spec,
        summary,
        layout: "M[((j*n+k)*n+l)*n+i] multiplies D_jk(xbar) U_li(x)",
        tensor: kernel.tensor().map(|m| m.iter().map(|c| [c.re, c.im]).collect()),
        dense_grid: dense.then_some(cfg.grid),
    };
    let text = json::to_pretty(&export)?;
    match cfg.out.as_deref() {
        Some(out) => {
            write_file(&sidecar(out, ".kernel.json"), &text)?;
            if dense {
                write_file(&sidecar(out, ".dense.csv"), &dense_csv(&kernel, &cfg.ray_grid()?)?)?;
            }
            Ok(String::new())
        }
        None => Ok(text),
    }
}
