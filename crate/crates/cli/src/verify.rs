// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Verification suites. Each one builds a [`ComparisonReport`] from a
//! [`RunConfig`] alone; timings go to a separate [`Runtimes`] record.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tomo_core::basis::{apply_channel_oracle, make_state, DensityMatrix, HilbertSpec, KrausSet, Operator, OutcomeLabel, StateKind};
use tomo_core::channels::{ChannelSpec, GaussianPositionChannel, VonNeumannModel};
use tomo_core::kernels::{
    apply_kernel, apply_kernel_quadrature, completeness_check, kraus_symbols, total_kernel, CompletenessReport,
    QuadratureRoute, SmearingSpec,
};
use tomo_core::tomography::{
    density_from_tomogram, operator_from_symbol, star_product, symbol_from_operator, tomogram_from_density,
    tomogram_from_hermitian, tomogram_scalar_product, RayGrid, RayGridParams,
};
use tomo_core::{TomoError, C64};

use crate::commands::{parse_channel, ORACLE_EXTRA_LEVELS};
use crate::config::{Flags, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{sidecar, write_file};
use crate::json;
use crate::report::{Check, ComparisonReport, Outcome, Runtimes, Table};
use crate::states::{random_operator, random_pure, random_rank2};

pub const SUITES: [&str; 7] = ["round-trip", "oracle", "von-neumann-sweep", "gauss-pos", "completeness", "calculus", "routes"];

/// Coarse grid of the brute-force route.
pub const ROUTES_GRID: RayGridParams = RayGridParams { x_max: 6.0, n_x: 65, n_theta: 16 };
/// Grid of the completeness suite.
pub const COMPLETENESS_GRID: RayGridParams = RayGridParams { x_max: 8.0, n_x: 129, n_theta: 32 };
/// Width of the outcome window that stands for one element of a continuous family.
pub const WINDOW_HALF_WIDTH: f64 = 0.5;
/// Factor applied to a Kraus element in the violation checks.
pub const SCALE_FACTOR: f64 = 0.9;

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub drop_kraus: Option<usize>,
    pub scale_kraus: Option<usize>,
    pub drop_window: Option<f64>,
}

fn grid_default(suite: &str) -> RayGridParams {
    match suite {
        "routes" => ROUTES_GRID,
        "completeness" => COMPLETENESS_GRID,
        _ => RayGridParams::default(),
    }
}

pub fn config(suite: &str, args: &[String], opts: &VerifyOptions, flags: &Flags) -> CliResult<RunConfig> {
    if !SUITES.contains(&suite) {
        return Err(CliError::usage(format!("unknown suite '{suite}'; known: {}", SUITES.join(", "))));
    }
    let modifies = opts.drop_kraus.is_some() || opts.scale_kraus.is_some() || opts.drop_window.is_some();
    if suite != "completeness" && (modifies || !args.is_empty()) {
        return Err(CliError::usage(format!("suite '{suite}' takes no arguments")));
    }
    if modifies && args.is_empty() {
        return Err(CliError::usage("--drop-kraus/--scale-kraus/--drop-window need a channel"));
    }
    let mut argv = vec![suite.to_string()];
    argv.extend(args.iter().cloned());
    let mut cfg = RunConfig::new("verify", argv, flags, grid_default(suite))?;
    if let Some((name, params)) = args.split_first() {
        cfg.channel = Some(parse_channel(name, params)?);
    }
    cfg.drop_kraus = opts.drop_kraus;
    cfg.scale_kraus = opts.scale_kraus;
    cfg.drop_window = opts.drop_window;
    Ok(cfg)
}

pub fn run_suite(cfg: &RunConfig) -> CliResult<Outcome> {
    let suite = cfg.args.first().map(String::as_str).unwrap_or_default();
    let mut report = ComparisonReport::new(suite, cfg);
    let mut runtimes = Runtimes::default();
    let start = Instant::now();
    match suite {
        "round-trip" => round_trip(cfg, &mut report)?,
        "oracle" => oracle(cfg, &mut report, &mut runtimes)?,
        "von-neumann-sweep" => von_neumann_sweep(cfg, &mut report)?,
        "gauss-pos" => gauss_pos(cfg, &mut report)?,
        "completeness" => completeness(cfg, &mut report)?,
        "calculus" => calculus(cfg, &mut report)?,
        "routes" => routes(cfg, &mut report, &mut runtimes)?,
        other => return Err(CliError::usage(format!("unknown suite '{other}'"))),
    }
    runtimes.record("total", start.elapsed().as_secs_f64());
    Ok(Outcome { report, runtimes })
}

pub fn cmd_verify(suite: &str, args: &[String], opts: &VerifyOptions, flags: &Flags) -> CliResult<String> {
    let cfg = config(suite, args, opts, flags)?;
    let Outcome { report, runtimes } = run_suite(&cfg)?;
    let text = report.to_json()?;
    let stdout = match cfg.out.as_deref() {
        Some(out) => {
            write_file(out, &text)?;
            write_file(&sidecar(out, ".runtime.json"), &json::to_pretty(&runtimes)?)?;
            String::new()
        }
        None => {
            log::info!("runtimes: {:?}", runtimes.0);
            text
        }
    };
    if report.pass {
        Ok(stdout)
    } else {
        print!("{stdout}");
        let worst: Vec<String> =
            report.failures().iter().map(|c| format!("{} = {}", c.name, json::fmt_f64(c.value))).collect();
        Err(CliError::CheckFailed(format!("suite {suite}: {}", worst.join("; "))))
    }
}

fn rng(cfg: &RunConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed)
}

fn fock(dim: usize, n: usize) -> CliResult<DensityMatrix> {
    Ok(make_state(&HilbertSpec::new(dim)?, &StateKind::Fock { n })?.density)
}

/// Fock 0-3 and 20 random rank-2 states through tomogram and back.
fn round_trip(cfg: &RunConfig, report: &mut ComparisonReport) -> CliResult<()> {
    let dim = cfg.dim_or(16);
    let grid = cfg.ray_grid()?;
    let spec = HilbertSpec::new(dim)?;
    let mut rng = rng(cfg);
    let mut states: Vec<(String, DensityMatrix)> =
        (0..4.min(dim)).map(|n| Ok((format!("fock {n}"), fock(dim, n)?))).collect::<CliResult<_>>()?;
    states.extend((0..20).map(|i| (format!("random rank-2 #{i}"), random_rank2(&mut rng, dim))));
    let mut rows = Vec::new();
    for (i, (name, rho)) in states.iter().enumerate() {
        let t = tomogram_from_density(rho, &grid)?;
        let rec = density_from_tomogram(&t, &spec, &cfg.reconstruction)?;
        let infidelity = 1.0 - rho.fidelity(&rec.density);
        rows.push(vec![i as f64, infidelity, rec.hermiticity_residual, rec.clipped_negativity]);
        report.push(Check::at_most(format!("{name} infidelity"), infidelity, cfg.tolerances.round_trip_infidelity));
    }
    report.tables.insert(
        "states".into(),
        Table {
            columns: vec!["index".into(), "infidelity".into(), "hermiticity_residual".into(), "clipped_negativity".into()],
            rows,
        },
    );
    Ok(())
}

fn compare_routes(spec: &ChannelSpec, rho: &DensityMatrix, grid: &RayGrid, cfg: &RunConfig, limit: f64) -> CliResult<Check> {
    let t = tomogram_from_density(rho, grid)?;
    let a = spec.apply(&t, rho.dim(), &cfg.reconstruction)?;
    let b = tomogram_from_hermitian(&spec.oracle(rho)?, grid)?;
    Ok(Check::tomograms(spec.to_string(), &a, &b, limit))
}

/// Kernel route against the density-matrix route for the discrete channels.
fn oracle(cfg: &RunConfig, report: &mut ComparisonReport, runtimes: &mut Runtimes) -> CliResult<()> {
    let dim = cfg.dim_or(16);
    let grid = cfg.ray_grid()?;
    let mut rng = rng(cfg);
    let qubit = random_rank2(&mut rng, 2);
    let osc = random_rank2(&mut rng, dim);
    let tol = cfg.tolerances;
    let mut cases: Vec<(ChannelSpec, &DensityMatrix, f64)> = Vec::new();
    for p in [0.0, 0.3, 0.5, 1.0] {
        cases.push((ChannelSpec::PhaseFlip { p }, &qubit, tol.oracle_qubit));
    }
    for gamma in [0.0, 0.3, 1.0] {
        cases.push((ChannelSpec::AmpDamp { gamma }, &qubit, tol.oracle_qubit));
    }
    for m in [0, 1] {
        cases.push((ChannelSpec::BasisProj { m }, &osc, tol.oracle_oscillator));
    }
    for kappa in [0.5, 1.0, 10.0] {
        cases.push((ChannelSpec::GaussProj { kappa }, &osc, tol.oracle_oscillator));
    }
    for (spec, rho, limit) in cases {
        let start = Instant::now();
        report.push(compare_routes(&spec, rho, &grid, cfg, limit)?);
        runtimes.record(spec.to_string(), start.elapsed().as_secs_f64());
    }
    Ok(())
}

/// Decoherence factors of the von Neumann measurement over a 5x5 (κ, g) sweep.
fn von_neumann_sweep(cfg: &RunConfig, report: &mut ComparisonReport) -> CliResult<()> {
    let dim = cfg.dim_or(3);
    let grid = cfg.ray_grid()?;
    let rho = random_rank2(&mut rng(cfg), dim);
    let t = tomogram_from_density(&rho, &grid)?;
    let mut rows = Vec::new();
    for kappa in [0.5, 1.0, 1.5, 2.0, 3.0] {
        for g in [0.1, 0.3, 0.6, 0.9, 1.2] {
            let model = VonNeumannModel::ladder(dim, g, kappa)?;
            let kraus = model.system_kraus()?;
            let out = apply_channel_oracle(&rho, &kraus)?.rho;
            let mut worst = 0.0f64;
            for i in 0..dim {
                for j in i + 1..dim {
                    let ratio = out.matrix()[(i, j)] / rho.matrix()[(i, j)];
                    let expected = model.decoherence_factor(i, j);
                    let rel = (ratio - C64::new(expected, 0.0)).norm() / expected;
                    worst = worst.max(rel);
                    rows.push(vec![kappa, g, i as f64, j as f64, ratio.re, expected, rel]);
                }
            }
            let tag = format!("kappa={kappa}, g={g}");
            report.push(Check::at_most(format!("decoherence factor {tag}"), worst, cfg.tolerances.decoherence_relative));
            let tomographic = apply_kernel(&t, &total_kernel(&kraus, "von-neumann"), &cfg.reconstruction)?;
            let oracle = tomogram_from_hermitian(&out, &grid)?;
            report.push(Check::tomograms(format!("tomographic route {tag}"), &tomographic, &oracle, cfg.tolerances.oracle_oscillator));
        }
    }
    report.tables.insert(
        "decoherence".into(),
        Table {
            columns: ["kappa", "g", "i", "j", "measured", "expected", "relative_error"].map(String::from).to_vec(),
            rows,
        },
    );
    Ok(())
}

/// Per-ray X-blur of the Gaussian position channel against the
/// coordinate-decoherence oracle, and the fitted blur width.
fn gauss_pos(cfg: &RunConfig, report: &mut ComparisonReport) -> CliResult<()> {
    let dim = cfg.dim_or(4);
    let grid = cfg.ray_grid()?;
    let xs = grid.x_nodes();
    let wx = grid.x_weights();
    let variance = |row: &[f64]| -> f64 {
        let m: f64 = row.iter().zip(xs).zip(&wx).map(|((v, x), w)| w * v * x).sum();
        row.iter().zip(xs).zip(&wx).map(|((v, x), w)| w * v * (x - m) * (x - m)).sum()
    };
    let mut rows = Vec::new();
    for kappa in [0.5, 1.0, 2.0] {
        let ch = GaussianPositionChannel::new(kappa)?;
        for n in 0..3.min(dim) {
            let rho = fock(dim, n)?;
            let t = tomogram_from_density(&rho, &grid)?;
            let out = ch.apply_nonselective(&t)?;
            let oracle = tomogram_from_hermitian(&ch.coordinate_oracle(&rho, dim + ORACLE_EXTRA_LEVELS)?, &grid)?;
            let tag = format!("kappa={kappa}, fock {n}");
            report.push(Check::tomograms(format!("blur vs oracle {tag}"), &out, &oracle, cfg.tolerances.blur_oracle));
            // widths below 0.1 are lost in the input variance
            let mut worst = 0.0f64;
            for (j, &theta) in grid.theta_nodes().iter().enumerate() {
                let expected = ch.blur_sigma(theta);
                if expected < 0.1 {
                    continue;
                }
                let fitted = (variance(out.row(j)) - variance(t.row(j))).max(0.0).sqrt();
                let rel = (fitted / expected - 1.0).abs();
                worst = worst.max(rel);
                rows.push(vec![kappa, n as f64, theta, fitted, expected]);
            }
            report.push(Check::at_most(format!("blur width {tag}"), worst, cfg.tolerances.blur_sigma_relative));
        }
    }
    report.tables.insert(
        "blur_width".into(),
        Table { columns: ["kappa", "fock", "theta", "sigma_fit", "sigma_expected"].map(String::from).to_vec(), rows },
    );
    Ok(())
}

fn residual(kraus: &KrausSet, grid: &RayGrid, cfg: &RunConfig) -> CliResult<CompletenessReport> {
    Ok(completeness_check(
        &kraus_symbols(kraus, grid),
        kraus.weights(),
        &HilbertSpec::new(kraus.dim())?,
        &cfg.reconstruction,
        &SmearingSpec::default(),
    )?)
}

fn window(a0: f64) -> impl Fn(&OutcomeLabel) -> bool {
    move |l| matches!(l, OutcomeLabel::Value(a) if (a - a0).abs() <= WINDOW_HALF_WIDTH)
}

fn completeness_dim(spec: &ChannelSpec, cfg: &RunConfig) -> usize {
    match spec {
        ChannelSpec::PhaseFlip { .. } | ChannelSpec::AmpDamp { .. } => 2,
        _ => cfg.dim_or(3),
    }
}

/// Built-in complete sets, each with the element removals or window
/// removals that must break completeness.
fn completeness(cfg: &RunConfig, report: &mut ComparisonReport) -> CliResult<()> {
    let grid = cfg.ray_grid()?;
    let tol = cfg.tolerances;
    if let Some(spec) = &cfg.channel {
        let kraus = spec
            .kraus(completeness_dim(spec, cfg))?
            .ok_or_else(|| TomoError::validation(format!("{} is kept in structural form and has no Kraus set", spec.name())))?;
        let mut k = kraus;
        let mut label = spec.to_string();
        if let Some(i) = cfg.drop_kraus {
            k = k.without(i)?;
            label.push_str(&format!(" without element {i}"));
        }
        if let Some(i) = cfg.scale_kraus {
            k = k.with_scaled(i, SCALE_FACTOR)?;
            label.push_str(&format!(" with element {i} scaled by {SCALE_FACTOR}"));
        }
        if let Some(a) = cfg.drop_window {
            k = k.without_outcomes(window(a))?;
            label.push_str(&format!(" without outcomes |a - {a}| <= {WINDOW_HALF_WIDTH}"));
        }
        let r = residual(&k, &grid, cfg)?;
        report.value("smeared_residual", r.smeared_residual);
        report.value("element_residual", r.element_residual);
        report.value("weak_residual", r.weak_residual);
        report.value("delta_deviation", r.delta_deviation);
        report.push(Check::at_most(format!("{label} residual"), r.residual, tol.completeness_pass));
        return Ok(());
    }

    let discrete = [
        ChannelSpec::Identity,
        ChannelSpec::PhaseFlip { p: 0.3 },
        ChannelSpec::AmpDamp { gamma: 0.3 },
        ChannelSpec::Dephase,
    ];
    for spec in discrete {
        let kraus = spec.kraus(completeness_dim(&spec, cfg))?.expect("discrete sets have Kraus operators");
        report.push(Check::at_most(format!("{spec} complete"), residual(&kraus, &grid, cfg)?.residual, tol.completeness_pass));
        for i in 0..kraus.len() {
            if kraus.len() > 1 {
                let r = residual(&kraus.without(i)?, &grid, cfg)?.residual;
                report.push(Check::exceeds(format!("{spec} without element {i}"), r, tol.completeness_violation));
            }
            let r = residual(&kraus.with_scaled(i, SCALE_FACTOR)?, &grid, cfg)?.residual;
            report.push(Check::exceeds(format!("{spec} element {i} scaled"), r, tol.completeness_violation));
        }
    }
    let dim = cfg.dim_or(3);
    let vn = ChannelSpec::VonNeumann { g: 0.5, kappa: 1.0 };
    let continuous: [(ChannelSpec, Vec<f64>); 2] = [
        (ChannelSpec::GaussProj { kappa: 1.0 }, (0..dim).map(|n| n as f64).collect()),
        // pointer readings centred on g a_i
        (vn.clone(), (0..dim).map(|i| 0.5 * i as f64).collect()),
    ];
    for (spec, centres) in continuous {
        let kraus = spec.kraus(dim)?.expect("continuous families have Kraus operators");
        report.push(Check::at_most(format!("{spec} complete"), residual(&kraus, &grid, cfg)?.residual, tol.completeness_pass));
        for a0 in centres {
            let r = residual(&kraus.without_outcomes(window(a0))?, &grid, cfg)?.residual;
            report.push(Check::exceeds(format!("{spec} without window at {a0}"), r, tol.completeness_violation));
            let r = residual(&kraus.with_outcomes_scaled(window(a0), SCALE_FACTOR)?, &grid, cfg)?.residual;
            report.push(Check::exceeds(format!("{spec} window at {a0} scaled"), r, tol.completeness_violation));
        }
    }
    Ok(())
}

/// Star product, tomogram scalar product and the canonical commutator.
fn calculus(cfg: &RunConfig, report: &mut ComparisonReport) -> CliResult<()> {
    let n = cfg.dim_or(8);
    let grid = cfg.ray_grid()?;
    let spec = HilbertSpec::new(n)?;
    let params = &cfg.reconstruction;
    let tol = cfg.tolerances;
    let mut rng = rng(cfg);

    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let a = random_operator(&mut rng, n);
        let b = random_operator(&mut rng, n);
        let star = star_product(&symbol_from_operator(&a, &grid), &symbol_from_operator(&b, &grid), &spec, params)?;
        let direct = symbol_from_operator(&Operator::new(a.matrix() * b.matrix())?, &grid);
        let d = star.max_abs_diff(&direct);
        worst = worst.max(d);
        rows.push(vec![i as f64, d]);
    }
    report.push(Check::at_most("star product vs matrix product (50 pairs)", worst, tol.star_product));
    report.tables.insert("star_product".into(), Table { columns: vec!["pair".into(), "max_abs".into()], rows });

    let pure = random_pure(&mut rng, n);
    let t = tomogram_from_density(&pure, &grid)?;
    let p = tomogram_scalar_product(&t, &t, params)?;
    report.push(Check::at_most("(T, T) of a pure state", (p - 1.0).abs(), tol.purity));
    let mixed = tomogram_from_density(&DensityMatrix::from_diagonal(&[0.5, 0.5])?, &grid)?;
    let p = tomogram_scalar_product(&mixed, &mixed, params)?;
    report.push(Check::at_most("(T, T) of the maximally mixed qubit", (p - 0.5).abs(), tol.purity));

    let fq = symbol_from_operator(&Operator::position(n), &grid);
    let fp = symbol_from_operator(&Operator::momentum(n), &grid);
    let f1 = symbol_from_operator(&Operator::identity(n), &grid);
    let qp = star_product(&fq, &fp, &spec, params)?;
    let pq = star_product(&fp, &fq, &spec, params)?;
    let one = C64::new(1.0, 0.0);
    let c = qp.linear_combination(one, &pq, -one).linear_combination(one, &f1, C64::new(0.0, -1.0));
    let op = operator_from_symbol(&c, &spec, params)?;
    // the last level carries the truncation term -i n |n-1><n-1|
    let mut inner = 0.0f64;
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            inner = inner.max(op.matrix()[(i, j)].norm());
        }
    }
    report.push(Check::at_most("[f_q, f_p]_star - i f_1 below the truncation edge", inner, tol.commutator));
    report.value("commutator_edge_entry_im", op.matrix()[(n - 1, n - 1)].im);
    Ok(())
}

/// Structured contraction against brute-force quadrature on a coarse grid.
fn routes(cfg: &RunConfig, report: &mut ComparisonReport, runtimes: &mut Runtimes) -> CliResult<()> {
    let grid = cfg.ray_grid()?;
    let rho = random_rank2(&mut rng(cfg), 2);
    let t = tomogram_from_density(&rho, &grid)?;
    let route = QuadratureRoute::default();
    for spec in [ChannelSpec::PhaseFlip { p: 0.3 }, ChannelSpec::AmpDamp { gamma: 0.4 }, ChannelSpec::Dephase] {
        let kernel = spec.kernel(2)?;
        let fast = apply_kernel(&t, &kernel, &cfg.reconstruction)?;
        let start = Instant::now();
        let slow = apply_kernel_quadrature(&t, &kernel, &route)?;
        runtimes.record(format!("quadrature {spec}"), start.elapsed().as_secs_f64());
        report.push(Check::tomograms(format!("{spec} structured vs quadrature"), &fast, &slow, cfg.tolerances.route_vs_route));
    }
    report.value("quadrature_k_max", route.k_max);
    report.value("quadrature_nodes", (route.panels * route.per_panel) as f64);
    Ok(())
}
