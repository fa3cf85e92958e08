// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Projective measurements in the number basis: sharp `|m><m|` and the
//! Gaussian-weighted family `Π_a`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::basis::{hermite_function, KrausSet, Operator, OutcomeLabel};
use crate::kernels::{partial_kernel, total_kernel, ProcessKernel};
use crate::quadrature::{composite_gauss_legendre, gauss_hermite_plain, trapezoid, Rule};
use crate::{tolerances, CMatrix, Result, TomoError, C64};

fn diagonal(dim: usize, f: impl Fn(usize) -> f64) -> Operator {
    Operator::new(CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::new(f(i), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
    .expect("finite diagonal")
}

/// Selective kernel `D_mm(x̄) U_mm(x)` of the outcome `m`. The output is a
/// tomogram density carrying the probability `<m|rho|m>`.
pub fn basis_projector_kernel(dim: usize, m: usize) -> Result<ProcessKernel> {
    if m >= dim {
        return Err(TomoError::validation(format!("projector index {m} outside dimension {dim}")));
    }
    let p = Operator::matrix_unit(dim, m, m);
    Ok(ProcessKernel::from_partials(dim, &[partial_kernel(&p, 1.0, OutcomeLabel::Index(m))], format!("basis-proj({m})")))
}

/// Complete set `{|m><m|}`: full dephasing in the number basis.
pub fn dephasing_kraus(dim: usize) -> KrausSet {
    KrausSet::discrete((0..dim).map(|m| Operator::matrix_unit(dim, m, m)).collect()).expect("projectors are valid")
}

pub fn dephasing_kernel(dim: usize) -> ProcessKernel {
    total_kernel(&dephasing_kraus(dim), "dephase")
}

/// `Π_a = N^{-1} sum_n exp(-κ² (n - a)² / 4) |n><n|` on an outcome grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianBasisProjector {
    pub kappa: f64,
    pub dim: usize,
}

impl GaussianBasisProjector {
    pub fn new(kappa: f64, dim: usize) -> Result<Self> {
        if kappa <= 0.0 || !kappa.is_finite() {
            return Err(TomoError::validation(format!("kappa {kappa} must be positive")));
        }
        if dim < 2 {
            return Err(TomoError::validation("dimension < 2"));
        }
        Ok(GaussianBasisProjector { kappa, dim })
    }

    /// `N² = √(2π) / κ`, fixed by `∫ Π_a² da = 1`.
    pub fn norm_squared(&self) -> f64 {
        (2.0 * PI).sqrt() / self.kappa
    }

    /// Trapezoid grid over `[-6/κ, dim - 1 + 6/κ]`, at least 129 nodes and a
    /// step no larger than `1/(2κ)`.
    pub fn outcome_grid(&self) -> Rule {
        let pad = 6.0 / self.kappa;
        let (lo, hi) = (-pad, (self.dim - 1) as f64 + pad);
        let n = (((hi - lo) * 2.0 * self.kappa).ceil() as usize + 1).max(129);
        trapezoid(n, lo, hi)
    }

    pub fn projector(&self, a: f64) -> Operator {
        let inv = self.norm_squared().sqrt().recip();
        let k2 = self.kappa * self.kappa;
        diagonal(self.dim, |n| inv * (-0.25 * k2 * (n as f64 - a).powi(2)).exp())
    }

    pub fn kraus(&self) -> Result<KrausSet> {
        let grid = self.outcome_grid();
        let ops = grid.nodes.iter().map(|&a| self.projector(a)).collect();
        let labels = grid.nodes.iter().map(|&a| OutcomeLabel::Value(a)).collect();
        KrausSet::new_complete(ops, labels, grid.weights, tolerances::COMPLETE_QUADRATURE)
    }

    pub fn kernel(&self) -> Result<ProcessKernel> {
        Ok(total_kernel(&self.kraus()?, format!("gauss-proj(kappa={})", self.kappa)))
    }

    /// Selective kernel of one outcome `a`.
    pub fn selective_kernel(&self, a: f64) -> ProcessKernel {
        let p = partial_kernel(&self.projector(a), 1.0, OutcomeLabel::Value(a));
        ProcessKernel::from_partials(self.dim, &[p], format!("gauss-proj(kappa={}, a={a})", self.kappa))
    }

    /// Off-diagonal suppression `exp(-κ² (n - m)² / 8)` of the non-selective channel.
    pub fn suppression(&self, n: usize, m: usize) -> f64 {
        (-self.kappa * self.kappa * (n as f64 - m as f64).powi(2) / 8.0).exp()
    }
}

/// `∫ T_n(Y, η) e^{iY} dY` for the number state `n`, by Gauss-Hermite
/// quadrature of its (rotation-invariant) position marginal.
struct FockCharacteristic {
    nodes: Vec<f64>,
    /// `w_i psi_n(u_i)²`.
    weights: Vec<f64>,
}

impl FockCharacteristic {
    fn new(n: usize) -> Self {
        let rule = gauss_hermite_plain(64);
        let weights = rule.nodes.iter().zip(&rule.weights).map(|(&u, &w)| w * hermite_function(n, u).powi(2)).collect();
        FockCharacteristic { nodes: rule.nodes, weights }
    }

    fn at(&self, eta: f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * (eta * u).cos()).sum()
    }
}

/// Right-hand side of the expansion of `D_nm(x̄) U_mn(x)` through the basis
/// tomograms `T_n`, `T_m`:
///
/// `(2π)^{-3} ∫ T_n(X' - X̄, ξ' - ξ̄) T_m(X'' + kX, ξ' + kξ)
///  exp{i[X' - X'' + (μ̄ν' - μ'ν̄)/2 + k(μ'ν - μν')/2]} dX' dξ' dX'' dk`.
///
/// The `X'` and `X''` integrals are taken along the ray by Gauss-Hermite
/// quadrature. `ξ'` runs over a square around `ξ̄` and, for each `ξ'`, `k`
/// over the window where `ξ' + kξ` stays inside the support of the
/// number-state characteristic function; both by composite Gauss-Legendre.
pub fn double_tomogram_integral(n: usize, m: usize, xbar: [f64; 3], x: [f64; 3]) -> Result<C64> {
    let xi_norm = x[1].hypot(x[2]);
    if xi_norm == 0.0 {
        return Err(TomoError::Generalized("U_mn at μ = ν = 0".into()));
    }
    let (fn_, fm) = (FockCharacteristic::new(n), FockCharacteristic::new(m));
    let reach = 2.0 * (2.0 * n.max(m) as f64 + 1.0).sqrt() + 4.5;
    let side = (2.0 * reach).ceil() as usize;
    let mu_rule = composite_gauss_legendre(side, 6, xbar[1] - reach, xbar[1] + reach);
    let nu_rule = composite_gauss_legendre(side, 6, xbar[2] - reach, xbar[2] + reach);
    let half = reach / xi_norm;
    let k_panels = (2.0 * half).ceil() as usize;
    let (ux, uy) = (x[1] / xi_norm, x[2] / xi_norm);
    let mut acc = C64::new(0.0, 0.0);
    for (&mp, &wm) in mu_rule.nodes.iter().zip(&mu_rule.weights) {
        for (&np, &wn) in nu_rule.nodes.iter().zip(&nu_rule.weights) {
            // ∫ T_n(X' - X̄, ξ' - ξ̄) e^{iX'} dX' = e^{iX̄} F_n(|ξ' - ξ̄|)
            let f = fn_.at((mp - xbar[1]).hypot(np - xbar[2]));
            if f.abs() < 1e-14 {
                continue;
            }
            let outer = C64::from_polar(wm * wn * f, xbar[0] + 0.5 * (xbar[1] * np - mp * xbar[2]));
            let k0 = -(mp * ux + np * uy) / xi_norm;
            let k_rule = composite_gauss_legendre(k_panels, 6, k0 - half, k0 + half);
            let mut inner = C64::new(0.0, 0.0);
            for (&k, &wk) in k_rule.nodes.iter().zip(&k_rule.weights) {
                // ∫ T_m(X'' + kX, ξ' + kξ) e^{-iX''} dX'' = e^{ikX} F_m(|ξ' + kξ|)
                let g = fm.at((mp + k * x[1]).hypot(np + k * x[2]));
                inner += C64::from_polar(wk * g, k * x[0] + 0.5 * k * (mp * x[2] - x[1] * np));
            }
            acc += outer * inner;
        }
    }
    Ok(acc / (2.0 * PI).powi(3))
}
