// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian position measurement
//! `Π_a = (πκ²)^{-1/4} ∫ exp(-(q - a)² / 2κ²) |q><q| dq`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{displacement_real, hermite_functions, DensityMatrix, Operator};
use crate::kernels::{gaussian_blur_rows, ProcessKernel, StructuralKernel};
use crate::quadrature::{gauss_hermite_plain, gauss_legendre, trapezoid, Rule};
use crate::tomography::{reconstruction_moments, ReconstructionParams, TomogramGrid};
use crate::{CMatrix, Result, TomoError, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPositionChannel {
    pub kappa: f64,
}

/// Quadrature controls for the selective tomogram density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectiveRoute {
    /// Radius beyond which the state's characteristic function is dropped;
    /// `None` picks it from the occupied number levels.
    pub k_cut: Option<f64>,
    pub panel_width: f64,
    pub per_panel: usize,
}

impl Default for SelectiveRoute {
    fn default() -> Self {
        SelectiveRoute { k_cut: None, panel_width: 1.0, per_panel: 12 }
    }
}

impl GaussianPositionChannel {
    pub fn new(kappa: f64) -> Result<Self> {
        if kappa <= 0.0 || !kappa.is_finite() {
            return Err(TomoError::validation(format!("kappa {kappa} must be positive")));
        }
        Ok(GaussianPositionChannel { kappa })
    }

    /// `Π_a(q)`.
    pub fn projector_value(&self, q: f64, a: f64) -> f64 {
        (PI * self.kappa * self.kappa).powf(-0.25) * (-(q - a).powi(2) / (2.0 * self.kappa * self.kappa)).exp()
    }

    /// Standard deviation `|sin θ| / (κ √2)` of the non-selective X-blur.
    pub fn blur_sigma(&self, theta: f64) -> f64 {
        theta.sin().abs() / (self.kappa * std::f64::consts::SQRT_2)
    }

    pub fn nonselective_kernel(&self) -> ProcessKernel {
        ProcessKernel::structural(StructuralKernel::GaussianBlur { kappa: self.kappa }, format!("gauss-pos(kappa={})", self.kappa))
    }

    pub fn apply_nonselective(&self, t: &TomogramGrid) -> Result<TomogramGrid> {
        gaussian_blur_rows(t, self.kappa)
    }

    /// Outcome grid covering the position support `[-extent, extent]` of a
    /// state plus six widths, with a step of at most `κ/2`.
    pub fn outcome_grid(&self, extent: f64) -> Rule {
        let half = extent + 6.0 * self.kappa;
        let n = ((4.0 * half / self.kappa).ceil() as usize + 1).max(33);
        trapezoid(n, -half, half)
    }

    /// Tomogram densities `T'_a` for every outcome `a`:
    ///
    /// `T'_a(X, μ, ν) = (1/4π²|ν|) ∫ T(x̄) exp{i[X̄ν - Xν̄ - (μ̄ν - μν̄)a]/ν
    ///  - [κ²(μ̄ν - μν̄)² + κ^{-2} ν̄² ν²] / 4ν²} dx̄`.
    ///
    /// The `X̄` integral of `T` is the characteristic function `χ(μ̄, ν̄)`,
    /// taken from the `dim`-level reconstruction of `T`. With `μ̄ = s + μt`,
    /// `ν̄ = νt` the remaining integral is
    /// `(1/4π²) ∫ χ(s + μt, νt) exp[-iXt - isa - κ²s²/4 - ν²t²/4κ²] ds dt`,
    /// regular as `ν -> 0`; the `θ = 0` ray is the limit
    /// `(πκ²)^{-1/2} exp(-(X - a)²/κ²) T(X, 0)`.
    pub fn selective_densities(
        &self,
        t: &TomogramGrid,
        outcomes: &[f64],
        dim: usize,
        params: &ReconstructionParams,
        route: &SelectiveRoute,
    ) -> Result<Vec<TomogramGrid>> {
        let grid = t.grid();
        let values: Vec<C64> = t.values().iter().map(|&v| C64::new(v, 0.0)).collect();
        let chi = Characteristic::new(reconstruction_moments(grid, &values, dim, params)?);
        let k_cut = route.k_cut.unwrap_or_else(|| chi.reach());
        let kappa = self.kappa;
        let s_max = 10.0 / kappa;
        let xs = grid.x_nodes().to_vec();
        // rows[j][a] = T'_a on ray j
        let rows: Vec<Vec<Vec<f64>>> = grid
            .theta_nodes()
            .par_iter()
            .enumerate()
            .map(|(j, &theta)| {
                let (mu, nu) = (theta.cos(), theta.sin());
                if nu.abs() < 1e-12 {
                    let pref = 1.0 / (PI.sqrt() * kappa);
                    return outcomes
                        .iter()
                        .map(|&a| {
                            t.row(j)
                                .iter()
                                .zip(&xs)
                                .map(|(v, &x)| v * pref * (-(x - mu * a).powi(2) / (kappa * kappa)).exp())
                                .collect()
                        })
                        .collect();
                }
                let mut t_max = (k_cut / nu.abs()).min(10.0 * kappa / nu.abs());
                if mu.abs() > 1e-12 {
                    t_max = t_max.min((k_cut + s_max) / mu.abs());
                }
                let t_rule = panels(-t_max, t_max, route);
                let mut h = vec![vec![C64::new(0.0, 0.0); t_rule.len()]; outcomes.len()];
                for (it, &tv) in t_rule.nodes.iter().enumerate() {
                    let lo = (-s_max).max(-mu * tv - k_cut);
                    let hi = s_max.min(-mu * tv + k_cut);
                    if hi <= lo {
                        continue;
                    }
                    let s_rule = panels(lo, hi, route);
                    let samples: Vec<(f64, C64)> = s_rule
                        .nodes
                        .iter()
                        .zip(&s_rule.weights)
                        .map(|(&s, &w)| (s, chi.eval(s + mu * tv, nu * tv) * (w * (-0.25 * kappa * kappa * s * s).exp())))
                        .collect();
                    for (ha, &a) in h.iter_mut().zip(outcomes) {
                        ha[it] = samples.iter().map(|&(s, c)| c * C64::from_polar(1.0, -s * a)).sum();
                    }
                }
                let damp: Vec<f64> = t_rule
                    .nodes
                    .iter()
                    .zip(&t_rule.weights)
                    .map(|(&tv, &w)| w * (-(nu * tv).powi(2) / (4.0 * kappa * kappa)).exp() / (4.0 * PI * PI))
                    .collect();
                let phases: Vec<Vec<C64>> = xs
                    .iter()
                    .map(|&x| t_rule.nodes.iter().zip(&damp).map(|(&tv, &d)| C64::from_polar(d, -x * tv)).collect())
                    .collect();
                h.iter()
                    .map(|ha| phases.iter().map(|p| p.iter().zip(ha).map(|(e, v)| (e * v).re).sum()).collect())
                    .collect()
            })
            .collect();
        outcomes
            .iter()
            .enumerate()
            .map(|(ia, a)| {
                let out = t.map_rows(|j, _| rows[j][ia].clone())?;
                Ok(out.with_provenance(format!("gauss-pos selective kappa={kappa} a={a}")))
            })
            .collect()
    }

    /// Non-selective output `rho(q, q') e^{-(q - q')²/4κ²}` in `out_dim` levels.
    pub fn coordinate_oracle(&self, rho: &DensityMatrix, out_dim: usize) -> Result<Operator> {
        let k2 = self.kappa * self.kappa;
        position_oracle(rho.matrix(), out_dim, |q, qp| (-(q - qp).powi(2) / (4.0 * k2)).exp())
    }

    /// Selective output `Π_a rho Π_a` in `out_dim` levels.
    pub fn selective_oracle(&self, rho: &DensityMatrix, a: f64, out_dim: usize) -> Result<Operator> {
        position_oracle(rho.matrix(), out_dim, |q, qp| self.projector_value(q, a) * self.projector_value(qp, a))
    }
}

/// Composite Gauss-Legendre over `[lo, hi]` with panels no wider than the
/// route's width.
fn panels(lo: f64, hi: f64, route: &SelectiveRoute) -> Rule {
    let count = ((hi - lo) / route.panel_width).ceil().max(1.0) as usize;
    let h = (hi - lo) / count as f64;
    let base = gauss_legendre(route.per_panel, 0.0, h);
    let mut nodes = Vec::with_capacity(count * route.per_panel);
    let mut weights = Vec::with_capacity(count * route.per_panel);
    for p in 0..count {
        let off = lo + h * p as f64;
        nodes.extend(base.nodes.iter().map(|x| x + off));
        weights.extend_from_slice(&base.weights);
    }
    Rule { nodes, weights }
}

/// `χ(μ, ν) = Tr{R exp(iμq + iνp)}` of a finite matrix `R`, restricted to
/// its occupied levels.
struct Characteristic {
    r: CMatrix,
}

impl Characteristic {
    fn new(r: CMatrix) -> Self {
        let scale = crate::basis::max_abs(&r).max(1e-300);
        let n = r.nrows();
        let used = (0..n)
            .rev()
            .find(|&k| (0..n).any(|l| r[(k, l)].norm() > 1e-12 * scale || r[(l, k)].norm() > 1e-12 * scale))
            .map_or(1, |k| k + 1);
        Characteristic { r: r.view((0, 0), (used, used)).into_owned() }
    }

    /// Radius beyond which `|χ|` is below round-off for the occupied levels.
    fn reach(&self) -> f64 {
        2.0 * (2.0 * self.r.nrows() as f64 - 1.0).sqrt() + 9.0
    }

    fn eval(&self, mu: f64, nu: f64) -> C64 {
        // exp(iμq + iνp) = D(α) with α = (iμ - ν)/√2
        let alpha = C64::new(-nu, mu) * std::f64::consts::FRAC_1_SQRT_2;
        let (rad, phi) = alpha.to_polar();
        let n = self.r.nrows();
        let d = displacement_real(n, rad);
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                let v = d[b * n + a];
                if v != 0.0 {
                    acc += self.r[(a, b)] * C64::from_polar(v, (b as f64 - a as f64) * phi);
                }
            }
        }
        acc
    }
}

/// `rho'_nm = ∫∫ psi_n(q) psi_m(q') rho(q, q') f(q, q') dq dq'` by a product
/// Gauss-Hermite rule.
fn position_oracle(rho: &CMatrix, out_dim: usize, f: impl Fn(f64, f64) -> f64) -> Result<Operator> {
    let n = rho.nrows();
    let rule = gauss_hermite_plain(128);
    let nq = rule.len();
    let width = n.max(out_dim);
    let table: Vec<Vec<f64>> = rule.nodes.iter().map(|&q| hermite_functions(width, q)).collect();
    let psi_in = CMatrix::from_fn(nq, n, |i, a| C64::new(table[i][a], 0.0));
    let rho_q = &psi_in * rho * psi_in.transpose();
    let weighted = CMatrix::from_fn(nq, nq, |i, j| {
        rho_q[(i, j)] * (rule.weights[i] * rule.weights[j] * f(rule.nodes[i], rule.nodes[j]))
    });
    let psi_out = CMatrix::from_fn(nq, out_dim, |i, a| C64::new(table[i][a], 0.0));
    Operator::new(crate::basis::hermitize(&(psi_out.transpose() * weighted * psi_out)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{make_state, HilbertSpec, StateKind};
    use crate::tomography::{tomogram_from_density, tomogram_from_hermitian, RayGrid};

    fn fock(n: usize, dim: usize) -> DensityMatrix {
        make_state(&HilbertSpec::new(dim).unwrap(), &StateKind::Fock { n }).unwrap().density
    }

    #[test]
    fn oracle_preserves_trace_and_damps_coherence() {
        let ch = GaussianPositionChannel::new(1.0).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let out = ch.coordinate_oracle(&rho, 40).unwrap();
        assert!((out.trace().re - 1.0).abs() < 1e-10);
        assert!(out.matrix()[(0, 1)].norm() < 0.5);
        let id = ch.coordinate_oracle(&rho, 2);
        assert!(id.is_ok());
    }

    #[test]
    fn theta_zero_selective_is_multiplication() {
        let ch = GaussianPositionChannel::new(0.8).unwrap();
        let grid = RayGrid::new(8.0, 129, 8).unwrap();
        let rho = fock(1, 4);
        let t = tomogram_from_density(&rho, &grid).unwrap();
        let a = 0.4;
        let out = ch
            .selective_densities(&t, &[a], 4, &ReconstructionParams::default(), &SelectiveRoute::default())
            .unwrap();
        let oracle = tomogram_from_hermitian(&ch.selective_oracle(&rho, a, 40).unwrap(), &grid).unwrap();
        assert!(out[0].max_abs_diff(&oracle) < 1e-5, "{}", out[0].max_abs_diff(&oracle));
    }
}
