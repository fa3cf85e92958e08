// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{tensor_index, ProcessKernel};
use crate::basis::{displacement_matrix, hermitize, Operator};
use crate::quadrature::composite_gauss_legendre;
use crate::tomography::{tomogram_from_hermitian, TomogramGrid};
use crate::{CMatrix, Result, TomoError, C64};

/// Radial rule of the brute-force route: composite Gauss-Legendre on
/// `[-k_max, k_max]`, no window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRoute {
    pub k_max: f64,
    pub panels: usize,
    pub per_panel: usize,
}

impl Default for QuadratureRoute {
    fn default() -> Self {
        QuadratureRoute { k_max: 10.0, panels: 20, per_panel: 16 }
    }
}

pub const MAX_BRUTE_NX: usize = 65;
pub const MAX_BRUTE_NTHETA: usize = 16;

/// `T'(x) = ∫ T(x̄) K(x̄, x) dx̄` by direct quadrature over
/// `x̄ = (kY, k cos θ̄, k sin θ̄)`, `dx̄ = k² dk dθ̄ dY`, with the kernel
/// evaluated from its tensor at every node.
pub fn apply_kernel_quadrature(
    t: &TomogramGrid,
    kernel: &ProcessKernel,
    route: &QuadratureRoute,
) -> Result<TomogramGrid> {
    let grid = t.grid();
    if grid.n_x() > MAX_BRUTE_NX || grid.n_theta() > MAX_BRUTE_NTHETA {
        return Err(TomoError::Budget(format!(
            "brute-force route limited to n_x <= {MAX_BRUTE_NX}, n_theta <= {MAX_BRUTE_NTHETA} (got {}, {})",
            grid.n_x(),
            grid.n_theta()
        )));
    }
    let m = kernel
        .tensor()
        .ok_or_else(|| TomoError::validation(format!("kernel '{}' has no coefficient tensor", kernel.name)))?;
    let n = kernel.dim().expect("tensor kernels have a dimension");
    let rule = composite_gauss_legendre(route.panels, route.per_panel, -route.k_max, route.k_max);
    let wx = grid.x_weights();
    let wt = grid.dtheta();

    let h = grid
        .theta_nodes()
        .par_iter()
        .enumerate()
        .map(|(j, &theta)| {
            let row = t.row(j);
            let mut acc = CMatrix::zeros(n, n);
            for (&k, &wk) in rule.nodes.iter().zip(&rule.weights) {
                // ∫ dY T(Y, θ̄) e^{ikY}; the Jacobian of X̄ = kY cancels the
                // homogeneity factor, leaving |k| from the polar area element
                let mut p = C64::new(0.0, 0.0);
                for (i, &y) in grid.x_nodes().iter().enumerate() {
                    p += C64::from_polar(wx[i] * row[i], k * y);
                }
                let w = p * (wt * wk * k.abs() / (2.0 * PI));
                let d = displacement_matrix(n, k * theta.cos(), k * theta.sin());
                for l in 0..n {
                    for i in 0..n {
                        let mut g = C64::new(0.0, 0.0);
                        for jj in 0..n {
                            for kk in 0..n {
                                g += m[tensor_index(n, jj, kk, l, i)] * d[(jj, kk)];
                            }
                        }
                        acc[(i, l)] += g * w;
                    }
                }
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(CMatrix::zeros(n, n), |a, b| a + b);
    let mut out = tomogram_from_hermitian(&Operator::new(hermitize(&h))?, grid)?;
    out.provenance = t.provenance.clone();
    Ok(out.with_provenance(format!("kernel {} (quadrature)", kernel.name)))
}
