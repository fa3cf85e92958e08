// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::basis::{displacement_real, max_abs, HilbertSpec, Operator};
use crate::quadrature::gauss_legendre;
use crate::tomography::{
    operator_from_symbol, scalar_product, symbol_from_operator, ReconstructionParams, SymbolGrid,
};
use crate::{CMatrix, Result, TomoError, C64};

/// Gaussian test functions in `(μ̄, ν̄)` used to smear the completeness
/// condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmearingSpec {
    pub width: f64,
    pub centres: Vec<(f64, f64)>,
    pub radial_nodes: usize,
}

impl Default for SmearingSpec {
    fn default() -> Self {
        SmearingSpec {
            width: 0.2,
            centres: vec![(0.0, 0.0), (0.3, 0.0), (0.0, 0.3), (-0.2, 0.25)],
            radial_nodes: 96,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletenessReport {
    /// Largest relative deviation of the smeared left side from the smeared
    /// image of the identity in the truncated space.
    pub smeared_residual: f64,
    /// `max |∫ f_E D_jk - δ_jk|`: the same condition tested against the
    /// quantizer elements themselves.
    pub element_residual: f64,
    /// `sum_a w_a (f_a, f_a)`.
    pub weak_value: f64,
    /// `Tr 1 = dim`.
    pub weak_target: f64,
    pub weak_residual: f64,
    /// Informational: smeared left side against the untruncated `δ(μ̄)δ(ν̄)`.
    pub delta_deviation: f64,
    /// Maximum of the three residuals above.
    pub residual: f64,
}

impl CompletenessReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}

/// Checks `(1/(2π)²) sum_a ∫ f_a f_a* e^{...} = δ(μ̄)δ(ν̄)` for a symbol set
/// with outcome weights, together with the weaker integrated constraint.
pub fn completeness_check(
    symbols: &[SymbolGrid],
    weights: &[f64],
    spec: &HilbertSpec,
    params: &ReconstructionParams,
    smearing: &SmearingSpec,
) -> Result<CompletenessReport> {
    let first = symbols.first().ok_or_else(|| TomoError::validation("empty symbol set"))?;
    if weights.len() != symbols.len() {
        return Err(TomoError::validation("one weight per symbol is required"));
    }
    if symbols.iter().any(|s| s.grid() != first.grid()) {
        return Err(TomoError::validation("symbols live on different ray grids"));
    }
    let dim = spec.dim();
    let grid = first.grid();

    // f_E = sum_a w_a f_a* ⋆ f_a, accumulated in the operator domain
    let mut e = CMatrix::zeros(dim, dim);
    let mut weak = C64::new(0.0, 0.0);
    for (f, &w) in symbols.iter().zip(weights) {
        let a = operator_from_symbol(f, spec, params)?;
        e += a.matrix().adjoint() * a.matrix() * C64::new(w, 0.0);
        weak += scalar_product(f, f, params)? * w;
    }
    let fe = symbol_from_operator(&Operator::new(e)?, grid);

    let back = operator_from_symbol(&fe, spec, params)?;
    let element_residual = max_abs(&(back.matrix() - CMatrix::identity(dim, dim)));

    let sigma = smearing.width;
    let reach = smearing.centres.iter().map(|c| c.0.hypot(c.1)).fold(0.0, f64::max) + 8.0 * sigma;
    let rule = gauss_legendre(smearing.radial_nodes, 0.0, reach);
    let wx = grid.x_weights();
    let diag: Vec<f64> = rule
        .nodes
        .iter()
        .map(|&k| {
            let d = displacement_real(dim, k * FRAC_1_SQRT_2);
            (0..dim).map(|n| d[n * dim + n]).sum()
        })
        .collect();
    let mut smeared_residual = 0.0f64;
    let mut delta_deviation = 0.0f64;
    for &(cm, cn) in &smearing.centres {
        let g = |m: f64, n: f64| {
            (-((m - cm).powi(2) + (n - cn).powi(2)) / (2.0 * sigma * sigma)).exp() / (2.0 * PI * sigma * sigma)
        };
        let mut lhs = C64::new(0.0, 0.0);
        let mut target = 0.0;
        for (j, &theta) in grid.theta_nodes().iter().enumerate() {
            let (s, c) = theta.sin_cos();
            for (r, (&k, &wk)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
                let (gp, gm) = (g(k * c, k * s), g(-k * c, -k * s));
                let mut fp = C64::new(0.0, 0.0);
                let mut fm = C64::new(0.0, 0.0);
                for (i, &x) in grid.x_nodes().iter().enumerate() {
                    let v = fe.value(j, i) * wx[i];
                    let ph = C64::from_polar(1.0, k * x);
                    fp += v * ph;
                    fm += v * ph.conj();
                }
                let w = grid.dtheta() * wk * k / (2.0 * PI);
                lhs += (fp * gp + fm * gm) * w;
                target += (gp + gm) * diag[r] * w;
            }
        }
        smeared_residual = smeared_residual.max((lhs - target).norm() / target.abs());
        delta_deviation = delta_deviation.max((lhs - g(0.0, 0.0)).norm() / g(0.0, 0.0));
    }
    let weak_value = weak.re;
    let weak_target = dim as f64;
    let weak_residual = (weak_value - weak_target).abs() / weak_target;
    Ok(CompletenessReport {
        smeared_residual,
        element_residual,
        weak_value,
        weak_target,
        weak_residual,
        delta_deviation,
        residual: smeared_residual.max(element_residual).max(weak_residual),
    })
}
