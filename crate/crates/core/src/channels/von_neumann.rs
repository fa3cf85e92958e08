// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Pointer-coupled measurement `U = exp(-i g A ⊗ p)` with a Gaussian pointer.

use std::f64::consts::PI;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::basis::{displacement_matrix, hermite_functions, DensityMatrix, KrausSet, Operator, OutcomeLabel};
use crate::kernels::{total_kernel, ProcessKernel, StructuralKernel};
use crate::quadrature::{gauss_hermite_plain, trapezoid, Rule};
use crate::{tolerances, CMatrix, Result, TomoError, C64};

/// Half-width of the default Q-grid beyond the extreme pointer positions,
/// in units of `1/sqrt(κ)`.
const Q_SPAN: f64 = 6.0;
const Q_NODES: usize = 129;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VonNeumannModel {
    /// Eigenvalues `a_i` of the measured observable, diagonal in the number basis.
    pub eigenvalues: Vec<f64>,
    /// Amplitudes `c_i` of the system state, used on the pointer side.
    pub amplitudes: Vec<C64>,
    pub g: f64,
    pub kappa: f64,
    pub pointer_dim: usize,
}

impl VonNeumannModel {
    pub fn new(eigenvalues: Vec<f64>, amplitudes: Vec<C64>, g: f64, kappa: f64, pointer_dim: usize) -> Result<Self> {
        if eigenvalues.is_empty() || eigenvalues.iter().any(|a| !a.is_finite()) {
            return Err(TomoError::validation("eigenvalues must be finite and non-empty"));
        }
        if amplitudes.len() != eigenvalues.len() {
            return Err(TomoError::validation("one amplitude per eigenvalue"));
        }
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(TomoError::validation(format!("sum |c_i|² = {norm}")));
        }
        if kappa <= 0.0 || !kappa.is_finite() || !g.is_finite() {
            return Err(TomoError::validation(format!("kappa {kappa} must be positive, g {g} finite")));
        }
        if pointer_dim < 2 {
            return Err(TomoError::validation("pointer dimension < 2"));
        }
        Ok(VonNeumannModel { eigenvalues, amplitudes, g, kappa, pointer_dim })
    }

    /// Model with `a_i = i` and equal-weight amplitudes; the usual system-side setup.
    pub fn ladder(dim: usize, g: f64, kappa: f64) -> Result<Self> {
        let c = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self::new((0..dim).map(|i| i as f64).collect(), vec![c; dim], g, kappa, 16)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn pointer_range(&self) -> (f64, f64) {
        let ga = self.eigenvalues.iter().map(|a| self.g * a);
        let lo = ga.clone().fold(f64::INFINITY, f64::min);
        let hi = ga.fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Trapezoid grid over `[min g a - 6/√κ, max g a + 6/√κ]`.
    pub fn default_q_grid(&self) -> Rule {
        let (lo, hi) = self.pointer_range();
        let pad = Q_SPAN / self.kappa.sqrt();
        trapezoid(Q_NODES, lo - pad, hi + pad)
    }

    /// `M_Q = (κ/2π)^{1/4} exp(-κ (Q - g A)² / 4)` on the default grid.
    pub fn system_kraus(&self) -> Result<KrausSet> {
        self.system_kraus_on(&self.default_q_grid())
    }

    pub fn system_kraus_on(&self, q: &Rule) -> Result<KrausSet> {
        let (lo, hi) = self.pointer_range();
        let pad = Q_SPAN / self.kappa.sqrt();
        let (qmin, qmax) = (q.nodes[0], q.nodes[q.len() - 1]);
        if qmin > lo - pad + 1e-12 || qmax < hi + pad - 1e-12 {
            return Err(TomoError::validation(format!(
                "Q-grid [{qmin}, {qmax}] does not span [{}, {}]",
                lo - pad,
                hi + pad
            )));
        }
        let n = self.dim();
        let pref = (self.kappa / (2.0 * PI)).powf(0.25);
        let ops = q
            .nodes
            .iter()
            .map(|&qv| {
                Operator::new(CMatrix::from_fn(n, n, |i, j| {
                    if i == j {
                        let d = qv - self.g * self.eigenvalues[i];
                        C64::new(pref * (-0.25 * self.kappa * d * d).exp(), 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = q.nodes.iter().map(|&v| OutcomeLabel::Value(v)).collect();
        KrausSet::new_complete(ops, labels, q.weights.clone(), tolerances::COMPLETE_QUADRATURE)
    }

    pub fn system_kernel(&self) -> Result<ProcessKernel> {
        Ok(total_kernel(&self.system_kraus()?, format!("von-neumann(g={}, kappa={})", self.g, self.kappa)))
    }

    /// `exp(-κ g² (a_i - a_j)² / 8)`.
    pub fn decoherence_factor(&self, i: usize, j: usize) -> f64 {
        let d = self.eigenvalues[i] - self.eigenvalues[j];
        (-self.kappa * self.g * self.g * d * d / 8.0).exp()
    }

    /// Pointer channel `rho_P -> sum_j |c_j|² e^{-i g a_j p} rho_P e^{i g a_j p}`.
    pub fn pointer_kernel(&self) -> ProcessKernel {
        let shifts = self.eigenvalues.iter().map(|a| self.g * a).collect();
        let weights = self.amplitudes.iter().map(|c| c.norm_sqr()).collect();
        ProcessKernel::structural(
            StructuralKernel::ShiftMixture { shifts, weights },
            format!("vn-pointer(g={}, kappa={})", self.g, self.kappa),
        )
    }

    /// Initial pointer `phi_0(Q) = (κ/2π)^{1/4} e^{-κ Q²/4}` in the number
    /// basis (the vacuum when `κ = 2`).
    pub fn pointer_state(&self) -> Result<DensityMatrix> {
        let v = gaussian_number_amplitudes(self.kappa, self.pointer_dim);
        let leak = 1.0 - v.iter().map(|c| c * c).sum::<f64>();
        if leak > tolerances::LEAKAGE_WARN {
            log::warn!("pointer state leaks {leak:.3e} beyond {} levels", self.pointer_dim);
        }
        let psi: Vec<C64> = v.iter().map(|&c| C64::new(c, 0.0)).collect();
        DensityMatrix::pure(&psi)
    }

    /// Pointer channel through truncated displacement operators built in a
    /// larger basis and cut back to `pointer_dim`.
    pub fn pointer_oracle(&self, rho: &DensityMatrix) -> Result<Operator> {
        let n = rho.dim();
        let big = n + 40;
        let mut embedded = CMatrix::zeros(big, big);
        embedded.view_mut((0, 0), (n, n)).copy_from(rho.matrix());
        let mut out = CMatrix::zeros(big, big);
        for (a, c) in self.eigenvalues.iter().zip(&self.amplitudes) {
            let d = displacement_matrix(big, 0.0, self.g * a);
            out += &d * &embedded * d.adjoint() * C64::new(c.norm_sqr(), 0.0);
        }
        Operator::new(crate::basis::hermitize(&out.view((0, 0), (n, n)).into_owned()))
    }

    /// System Kraus set from the truncated joint unitary `exp(-i g A ⊗ p)`
    /// with the pointer in the vacuum (`κ = 2`). Independent of the
    /// Q-representation: the environment is traced in the number basis.
    pub fn joint_unitary_kraus(&self, env_dim: usize) -> Result<KrausSet> {
        if (self.kappa - 2.0).abs() > 1e-12 {
            return Err(TomoError::validation("joint-unitary construction assumes the vacuum pointer (kappa = 2)"));
        }
        let n = self.dim();
        let p = Operator::momentum(env_dim).into_matrix();
        let eig = SymmetricEigen::new(p);
        let total = n * env_dim;
        let mut u = CMatrix::zeros(total, total);
        for (i, a) in self.eigenvalues.iter().enumerate() {
            let phases = eig.eigenvalues.map(|l| C64::from_polar(1.0, -self.g * a * l));
            let block = &eig.eigenvectors * CMatrix::from_diagonal(&phases) * eig.eigenvectors.adjoint();
            u.view_mut((i * env_dim, i * env_dim), (env_dim, env_dim)).copy_from(&block);
        }
        let mut probs = vec![0.0; env_dim];
        probs[0] = 1.0;
        crate::basis::joint_unitary_kraus(&Operator::new(u)?, &probs, env_dim)
    }
}

/// Number-basis amplitudes of `(κ/2π)^{1/4} e^{-κ Q²/4}`.
pub(crate) fn gaussian_number_amplitudes(kappa: f64, dim: usize) -> Vec<f64> {
    let rule = gauss_hermite_plain(128);
    let pref = (kappa / (2.0 * PI)).powf(0.25);
    let mut c = vec![0.0; dim];
    for (&q, &w) in rule.nodes.iter().zip(&rule.weights) {
        let phi = pref * (-0.25 * kappa * q * q).exp();
        for (cn, h) in c.iter_mut().zip(hermite_functions(dim, q)) {
            *cn += w * phi * h;
        }
    }
    c
}

/// `max |rho'_ij / rho_ij - factor_ij|` over entries with `|rho_ij| > floor`.
pub fn decoherence_deviation(model: &VonNeumannModel, rho: &CMatrix, out: &CMatrix, floor: f64) -> f64 {
    let n = rho.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if rho[(i, j)].norm() > floor {
                let f = model.decoherence_factor(i, j);
                worst = worst.max(((out[(i, j)] / rho[(i, j)]) - f).norm() / f);
            }
        }
    }
    worst
}
