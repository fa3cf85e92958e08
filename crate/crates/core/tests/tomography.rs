// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tomo_core::basis::{hermitize, make_state, DensityMatrix, HilbertSpec, Operator, StateKind};
use tomo_core::tolerances::Tolerances;
use tomo_core::tomography::{
    density_from_tomogram, operator_from_symbol, scalar_product, star_product, symbol_from_operator,
    tomogram_from_density, tomogram_scalar_product, RayGrid, ReconstructionParams,
};
use tomo_core::{CMatrix, C64};

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
}

fn random_rank2(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
    let mut m = CMatrix::zeros(n, n);
    let p: f64 = rng.random_range(0.5..0.95);
    for w in [p, 1.0 - p] {
        let v = nalgebra::DVector::from_fn(n, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let v = &v / C64::new(v.norm(), 0.0);
        m += &v * v.adjoint() * C64::new(w, 0.0);
    }
    DensityMatrix::new(Operator::new(hermitize(&m)).unwrap()).unwrap()
}

#[test]
fn fock_and_random_round_trip() {
    let tol = Tolerances::default().round_trip_infidelity;
    let grid = RayGrid::default();
    let spec = HilbertSpec::new(16).unwrap();
    let params = ReconstructionParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut states: Vec<DensityMatrix> =
        (0..4).map(|n| make_state(&spec, &StateKind::Fock { n }).unwrap().density).collect();
    states.extend((0..5).map(|_| random_rank2(&mut rng, 16)));
    for rho in states {
        let t = tomogram_from_density(&rho, &grid).unwrap();
        let rec = density_from_tomogram(&t, &spec, &params).unwrap();
        assert!(1.0 - rho.fidelity(&rec.density) <= tol);
        assert!(rec.hermiticity_residual < 1e-8);
    }
}

#[test]
fn star_product_is_matrix_product() {
    let tol = Tolerances::default().star_product;
    let grid = RayGrid::default();
    let spec = HilbertSpec::new(8).unwrap();
    let params = ReconstructionParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let a = Operator::new(random_matrix(&mut rng, 8)).unwrap();
        let b = Operator::new(random_matrix(&mut rng, 8)).unwrap();
        let fa = symbol_from_operator(&a, &grid);
        let fb = symbol_from_operator(&b, &grid);
        let star = star_product(&fa, &fb, &spec, &params).unwrap();
        let direct = symbol_from_operator(&Operator::new(a.matrix() * b.matrix()).unwrap(), &grid);
        assert!(star.max_abs_diff(&direct) <= tol, "{:e}", star.max_abs_diff(&direct));
    }
}

#[test]
fn purity_anchors() {
    let tol = Tolerances::default().purity;
    let grid = RayGrid::default();
    let params = ReconstructionParams::default();
    let pure = make_state(&HilbertSpec::new(4).unwrap(), &StateKind::Coherent { re: 0.3, im: -0.2 }).unwrap().density;
    let t = tomogram_from_density(&pure, &grid).unwrap();
    assert!((tomogram_scalar_product(&t, &t, &params).unwrap() - pure.purity()).abs() <= tol);
    let mixed = tomogram_from_density(&DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap(), &grid).unwrap();
    assert!((tomogram_scalar_product(&mixed, &mixed, &params).unwrap() - 0.5).abs() <= tol);
}

#[test]
fn canonical_commutator_in_symbols() {
    let tol = Tolerances::default().commutator;
    let grid = RayGrid::default();
    let n = 8;
    let spec = HilbertSpec::new(n).unwrap();
    let params = ReconstructionParams::default();
    let fq = symbol_from_operator(&Operator::position(n), &grid);
    let fp = symbol_from_operator(&Operator::momentum(n), &grid);
    let f1 = symbol_from_operator(&Operator::identity(n), &grid);
    let qp = star_product(&fq, &fp, &spec, &params).unwrap();
    let pq = star_product(&fp, &fq, &spec, &params).unwrap();
    let c = qp.linear_combination(C64::new(1.0, 0.0), &pq, C64::new(-1.0, 0.0));
    let c = c.linear_combination(C64::new(1.0, 0.0), &f1, C64::new(0.0, -1.0));
    let op = operator_from_symbol(&c, &spec, &params).unwrap();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            assert!(op.matrix()[(i, j)].norm() <= tol);
        }
    }
    // the truncation edge carries -i n |n-1><n-1|
    assert!((op.matrix()[(n - 1, n - 1)] - C64::new(0.0, -(n as f64))).norm() < 1e-5);
    assert!((scalar_product(&f1, &f1, &params).unwrap().re - n as f64).abs() < 1e-6);
}
