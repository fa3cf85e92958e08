// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Library channels: tomographic route against the density-matrix route.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use tomo_core::basis::{make_state, DensityMatrix, HilbertSpec, Operator, StateKind};
use tomo_core::channels::{
    ChannelSpec, GaussianBasisProjector, GaussianPositionChannel, QubitChannel, SelectiveRoute, VonNeumannModel,
};
use tomo_core::kernels::{apply_kernel, apply_kernel_quadrature, QuadratureRoute};
use tomo_core::tolerances::Tolerances;
use tomo_core::tomography::{tomogram_from_density, tomogram_from_hermitian, RayGrid, ReconstructionParams, TomogramGrid};
use tomo_core::{CMatrix, C64};

fn state(dim: usize, kind: StateKind) -> DensityMatrix {
    make_state(&HilbertSpec::new(dim).unwrap(), &kind).unwrap().density
}

fn fock(dim: usize, n: usize) -> DensityMatrix {
    state(dim, StateKind::Fock { n })
}

fn generic(dim: usize) -> DensityMatrix {
    let psi: Vec<C64> = (0..dim).map(|k| C64::from_polar(1.0 / (1.0 + k as f64), 0.9 * k as f64 + 0.2)).collect();
    let pure = DensityMatrix::pure(&psi).unwrap();
    // mix with the maximally mixed state so that every entry is populated
    let m = pure.matrix() * C64::new(0.8, 0.0) + CMatrix::identity(dim, dim) * C64::new(0.2 / dim as f64, 0.0);
    DensityMatrix::new(Operator::new(m).unwrap()).unwrap()
}

fn routes(spec: &ChannelSpec, rho: &DensityMatrix, grid: &RayGrid) -> (TomogramGrid, TomogramGrid) {
    let t = tomogram_from_density(rho, grid).unwrap();
    let tomographic = spec.apply(&t, rho.dim(), &ReconstructionParams::default()).unwrap();
    let oracle = tomogram_from_hermitian(&spec.oracle(rho).unwrap(), grid).unwrap();
    (tomographic, oracle)
}

#[test]
fn qubit_channels_match_oracle() {
    let tol = Tolerances::default().oracle_qubit;
    let grid = RayGrid::default();
    for spec in [
        ChannelSpec::PhaseFlip { p: 0.3 },
        ChannelSpec::PhaseFlip { p: 0.5 },
        ChannelSpec::AmpDamp { gamma: 0.25 },
        ChannelSpec::AmpDamp { gamma: 0.8 },
    ] {
        let (a, b) = routes(&spec, &generic(2), &grid);
        assert!(a.max_abs_diff(&b) <= tol, "{spec}: {:e}", a.max_abs_diff(&b));
    }
}

#[test]
fn total_decay_gives_ground_state() {
    let grid = RayGrid::default();
    let spec = ChannelSpec::AmpDamp { gamma: 1.0 };
    let (out, _) = routes(&spec, &generic(2), &grid);
    let t0 = tomogram_from_density(&fock(2, 0), &grid).unwrap();
    assert!(out.max_abs_diff(&t0) <= 1e-5);
}

#[test]
fn half_phase_flip_removes_coherence() {
    let grid = RayGrid::default();
    let plus = DensityMatrix::pure(&[C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)]).unwrap();
    let (out, _) = routes(&ChannelSpec::PhaseFlip { p: 0.5 }, &plus, &grid);
    let mixed = tomogram_from_density(&DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap(), &grid).unwrap();
    assert!(out.max_abs_diff(&mixed) <= 1e-5);
}

#[test]
fn qubit_endpoints_are_identity() {
    let grid = RayGrid::default();
    let rho = generic(2);
    let t = tomogram_from_density(&rho, &grid).unwrap();
    for ch in [QubitChannel::PhaseFlip { p: 1.0 }, QubitChannel::AmplitudeDamping { gamma: 0.0 }] {
        let out = apply_kernel(&t, &ch.kernel(), &ReconstructionParams::default()).unwrap();
        assert!(out.max_abs_diff(&t) <= 1e-6, "{}", ch.name());
    }
}

#[test]
fn basis_projection_selective_and_dephasing() {
    let grid = RayGrid::default();
    let params = ReconstructionParams::default();
    // fock m in, selective m out: the same tomogram with probability one
    let t1 = tomogram_from_density(&fock(3, 1), &grid).unwrap();
    let out = ChannelSpec::BasisProj { m: 1 }.apply(&t1, 3, &params).unwrap();
    assert!(out.max_abs_diff(&t1) <= 1e-6);

    let mix = state(2, StateKind::Mixture {
        components: vec![(0.25, StateKind::Fock { n: 0 }), (0.75, StateKind::Fock { n: 1 })],
    });
    let t = tomogram_from_density(&mix, &grid).unwrap();
    let sel = ChannelSpec::BasisProj { m: 0 }.apply(&t, 2, &params).unwrap();
    for p in sel.normalizations() {
        assert!((p - 0.25).abs() <= 1e-6, "{p}");
    }

    let rho = generic(4);
    let (a, _) = routes(&ChannelSpec::Dephase, &rho, &grid);
    let diag: Vec<f64> = (0..4).map(|i| rho.matrix()[(i, i)].re).collect();
    let target = tomogram_from_density(&DensityMatrix::from_diagonal(&diag).unwrap(), &grid).unwrap();
    assert!(a.max_abs_diff(&target) <= 1e-6);
}

#[test]
fn gaussian_basis_projector_matches_oracle() {
    let grid = RayGrid::default();
    let tol = Tolerances::default().oracle_oscillator;
    for kappa in [0.7, 1.0, 2.5] {
        let (a, b) = routes(&ChannelSpec::GaussProj { kappa }, &generic(4), &grid);
        assert!(a.max_abs_diff(&b) <= tol, "kappa {kappa}: {:e}", a.max_abs_diff(&b));
    }
    // κ = 1: coherences scale by exp(-κ²(n-m)²/8)
    let p = GaussianBasisProjector::new(1.0, 4).unwrap();
    let rho = generic(4);
    let out = ChannelSpec::GaussProj { kappa: 1.0 }.oracle(&rho).unwrap();
    for n in 0..4 {
        for m in 0..4 {
            let ratio = out.matrix()[(n, m)] / rho.matrix()[(n, m)];
            assert!((ratio.re - p.suppression(n, m)).abs() <= 1e-6 && ratio.im.abs() <= 1e-6);
        }
    }
}

#[test]
fn von_neumann_system_route_matches_oracle() {
    let grid = RayGrid::default();
    let tol = Tolerances::default().oracle_oscillator;
    for (g, kappa) in [(0.5, 1.0), (1.0, 2.0)] {
        let (a, b) = routes(&ChannelSpec::VonNeumann { g, kappa }, &generic(3), &grid);
        assert!(a.max_abs_diff(&b) <= tol, "g {g} kappa {kappa}: {:e}", a.max_abs_diff(&b));
    }
    let rho = generic(3);
    let (a, _) = routes(&ChannelSpec::VonNeumann { g: 0.0, kappa: 1.0 }, &rho, &grid);
    assert!(a.max_abs_diff(&tomogram_from_density(&rho, &grid).unwrap()) <= 1e-6);
}

#[test]
fn von_neumann_decoherence_relative_sweep() {
    let tol = Tolerances::default().decoherence_relative;
    let rho = generic(3);
    for kappa in [0.5, 1.0, 1.5, 2.0, 3.0] {
        for g in [0.1, 0.3, 0.6, 0.9, 1.2] {
            let m = VonNeumannModel::ladder(3, g, kappa).unwrap();
            let out = tomo_core::basis::apply_channel_oracle(&rho, &m.system_kraus().unwrap()).unwrap();
            let dev = tomo_core::channels::decoherence_deviation(&m, rho.matrix(), out.rho.matrix(), 1e-12);
            assert!(dev <= tol, "kappa {kappa} g {g}: {dev:e}");
        }
    }
}

#[test]
fn pointer_single_shift_recentres_gaussian() {
    let grid = RayGrid::default();
    let g = 1.0;
    let a = 1.5;
    let spec = ChannelSpec::VnPointer { g, eigenvalues: vec![a], weights: vec![1.0] };
    let vac = fock(16, 0);
    let t = tomogram_from_density(&vac, &grid).unwrap();
    let out = spec.apply(&t, 16, &ReconstructionParams::default()).unwrap();
    // θ = 0: |psi_0(X - g a)|²
    let worst = grid
        .x_nodes()
        .iter()
        .zip(out.row(0))
        .map(|(&x, v)| (v - (-(x - g * a).powi(2)).exp() / PI.sqrt()).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-5, "{worst:e}");

    let zero = ChannelSpec::VnPointer { g: 0.0, eigenvalues: vec![0.0, 1.0], weights: vec![0.5, 0.5] };
    let same = zero.apply(&t, 16, &ReconstructionParams::default()).unwrap();
    assert!(same.max_abs_diff(&t) <= 1e-12);
}

#[test]
fn pointer_two_outcome_matches_oracle() {
    let grid = RayGrid::default();
    let spec = ChannelSpec::VnPointer { g: 1.0, eigenvalues: vec![-1.0, 1.0], weights: vec![0.4, 0.6] };
    let (a, b) = routes(&spec, &fock(16, 0), &grid);
    assert!(a.max_abs_diff(&b) <= 1e-4, "{:e}", a.max_abs_diff(&b));
    // bimodal position marginal
    let row = a.row(0);
    let mid = grid.n_x() / 2;
    let peak = |x: f64| row[((x + grid.x_max()) / grid.dx()).round() as usize];
    assert!(peak(-1.0) > row[mid] && peak(1.0) > row[mid]);
}

#[test]
fn gaussian_position_blur_matches_coordinate_oracle() {
    let grid = RayGrid::default();
    let tol = Tolerances::default().blur_oracle;
    let (a, b) = routes(&ChannelSpec::GaussPos { kappa: 1.0 }, &fock(4, 1), &grid);
    // θ = π/2 ray
    let j = grid.n_theta() / 2;
    assert!((grid.theta_nodes()[j] - PI / 2.0).abs() < 1e-12);
    let ray = a.row(j).iter().zip(b.row(j)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(ray <= tol, "{ray:e}");
    assert!(a.max_abs_diff(&b) <= tol, "{:e}", a.max_abs_diff(&b));
}

#[test]
fn gaussian_position_weak_limit_and_width() {
    let grid = RayGrid::default();
    let t = tomogram_from_density(&fock(4, 0), &grid).unwrap();
    let weak = GaussianPositionChannel::new(200.0).unwrap().apply_nonselective(&t).unwrap();
    assert!(weak.max_abs_diff(&t) <= 1e-4);

    let tol = Tolerances::default().blur_sigma_relative;
    let ch = GaussianPositionChannel::new(1.0).unwrap();
    let out = ch.apply_nonselective(&t).unwrap();
    let xs = grid.x_nodes();
    let wx = grid.x_weights();
    for (j, &theta) in grid.theta_nodes().iter().enumerate() {
        let expect = ch.blur_sigma(theta);
        if expect < 0.1 {
            continue;
        }
        let var: f64 = out.row(j).iter().zip(xs).zip(&wx).map(|((v, x), w)| w * v * x * x).sum();
        let fitted = (var - 0.5).sqrt();
        assert!((fitted / expect - 1.0).abs() <= tol, "theta {theta}: {fitted} vs {expect}");
    }
}

#[test]
fn gaussian_position_selective_marginal() {
    let grid = RayGrid::new(8.0, 65, 16).unwrap();
    let ch = GaussianPositionChannel::new(1.0).unwrap();
    let rho = generic(3);
    let t = tomogram_from_density(&rho, &grid).unwrap();
    let outcomes = ch.outcome_grid(5.0);
    let dens = ch
        .selective_densities(&t, &outcomes.nodes, 3, &ReconstructionParams::default(), &SelectiveRoute::default())
        .unwrap();
    let mut sum = vec![0.0; grid.len()];
    for (d, &w) in dens.iter().zip(&outcomes.weights) {
        for (s, v) in sum.iter_mut().zip(d.values()) {
            *s += w * v;
        }
    }
    let sum = TomogramGrid::new(grid.clone(), sum, vec![]).unwrap();
    let blur = ch.apply_nonselective(&t).unwrap();
    assert!(sum.max_abs_diff(&blur) <= 1e-4, "{:e}", sum.max_abs_diff(&blur));

    // one outcome against Π_a rho Π_a
    let ia = outcomes.len() / 2 + 3;
    let oracle = tomogram_from_hermitian(&ch.selective_oracle(&rho, outcomes.nodes[ia], 40).unwrap(), &grid).unwrap();
    assert!(dens[ia].max_abs_diff(&oracle) <= 1e-5);
}

#[test]
fn library_channels_preserve_normalization() {
    let grid = RayGrid::default();
    let params = ReconstructionParams::default();
    let cases: Vec<(ChannelSpec, DensityMatrix)> = vec![
        (ChannelSpec::Identity, generic(3)),
        (ChannelSpec::PhaseFlip { p: 0.2 }, generic(2)),
        (ChannelSpec::AmpDamp { gamma: 0.6 }, generic(2)),
        (ChannelSpec::Dephase, generic(3)),
        (ChannelSpec::GaussProj { kappa: 1.0 }, generic(3)),
        (ChannelSpec::VonNeumann { g: 0.7, kappa: 1.0 }, generic(3)),
        (ChannelSpec::VnPointer { g: 1.0, eigenvalues: vec![0.0, 1.0], weights: vec![0.5, 0.5] }, fock(16, 0)),
        (ChannelSpec::GaussPos { kappa: 1.0 }, generic(3)),
    ];
    for (spec, rho) in cases {
        let t = tomogram_from_density(&rho, &grid).unwrap();
        let out = spec.apply(&t, rho.dim(), &params).unwrap();
        assert!(out.normalization_drift() <= 1e-5, "{spec}: {:e}", out.normalization_drift());
    }
}

#[test]
fn brute_route_agrees_with_structured_route() {
    let grid = RayGrid::new(6.0, 65, 16).unwrap();
    let tol = Tolerances::default().route_vs_route;
    for spec in [ChannelSpec::PhaseFlip { p: 0.3 }, ChannelSpec::AmpDamp { gamma: 0.4 }] {
        let kernel = spec.kernel(2).unwrap();
        let t = tomogram_from_density(&generic(2), &grid).unwrap();
        let fast = apply_kernel(&t, &kernel, &ReconstructionParams::default()).unwrap();
        let slow = apply_kernel_quadrature(&t, &kernel, &QuadratureRoute::default()).unwrap();
        assert!(fast.max_abs_diff(&slow) <= tol, "{spec}: {:e}", fast.max_abs_diff(&slow));
    }
    let big = RayGrid::default();
    let t = tomogram_from_density(&generic(2), &big).unwrap();
    let kernel = ChannelSpec::PhaseFlip { p: 0.3 }.kernel(2).unwrap();
    assert!(matches!(
        apply_kernel_quadrature(&t, &kernel, &QuadratureRoute::default()),
        Err(tomo_core::TomoError::Budget(_))
    ));
}
