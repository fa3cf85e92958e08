// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::tomography::TomogramGrid;
use crate::{Result, TomoError, C64};

/// Delta-bearing kernels kept in their exact per-ray form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum StructuralKernel {
    /// `δ(x̄ - x)`.
    Identity,
    /// `sum_j w_j` coordinate shifts by `s_j`: `T'(X, θ) = sum_j w_j T(X - cos θ s_j, θ)`.
    ShiftMixture { shifts: Vec<f64>, weights: Vec<f64> },
    /// Non-selective Gaussian position measurement: X-blur of standard
    /// deviation `|sin θ| / (κ √2)` on every ray.
    GaussianBlur { kappa: f64 },
}

impl StructuralKernel {
    pub fn apply(&self, t: &TomogramGrid) -> Result<TomogramGrid> {
        match self {
            StructuralKernel::Identity => Ok(t.clone()),
            StructuralKernel::ShiftMixture { shifts, weights } => shift_rows(t, shifts, weights),
            StructuralKernel::GaussianBlur { kappa } => gaussian_blur_rows(t, *kappa),
        }
    }
}

struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Angular frequency of every FFT bin.
    omega: Vec<f64>,
}

impl Spectral {
    fn new(n: usize, dx: f64) -> Self {
        let mut planner = FftPlanner::new();
        let omega = (0..n)
            .map(|m| {
                let m = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
                2.0 * PI * m / (n as f64 * dx)
            })
            .collect();
        Spectral { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n), omega }
    }

    /// Applies the multiplier `h(ω)` to a real row.
    fn filter(&self, row: &[f64], h: impl Fn(f64) -> C64) -> Vec<f64> {
        let n = row.len();
        let mut buf: Vec<C64> = row.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        for (b, &w) in buf.iter_mut().zip(&self.omega) {
            *b *= h(w);
        }
        self.inverse.process(&mut buf);
        buf.iter().map(|z| z.re / n as f64).collect()
    }
}

/// Mixture of per-ray X shifts, `T'(X, θ) = sum_j w_j T(X - cos θ s_j, θ)`,
/// applied exactly as a spectral phase.
pub fn shift_rows(t: &TomogramGrid, shifts: &[f64], weights: &[f64]) -> Result<TomogramGrid> {
    if shifts.len() != weights.len() || shifts.is_empty() {
        return Err(TomoError::validation("shift mixture needs one weight per shift"));
    }
    let grid = t.grid();
    let limit = 0.5 * grid.x_max();
    if let Some(s) = shifts.iter().find(|s| s.abs() > limit) {
        return Err(TomoError::validation(format!(
            "shift {s} exceeds half the grid span ({limit}); enlarge x_max"
        )));
    }
    let spectral = Spectral::new(grid.n_x(), grid.dx());
    let rows: Vec<Vec<f64>> = (0..grid.n_theta())
        .into_par_iter()
        .map(|j| {
            let c = grid.theta_nodes()[j].cos();
            spectral.filter(t.row(j), |w| {
                shifts.iter().zip(weights).map(|(s, p)| C64::from_polar(*p, -w * c * s)).sum()
            })
        })
        .collect();
    let mut it = rows.into_iter();
    t.map_rows(|_, _| it.next().expect("one row per ray"))
}

/// Per-ray Gaussian X-blur with standard deviation `|sin θ| / (κ √2)`.
///
/// Rows whose width is at least one grid step are convolved directly on the
/// grid (no wrap-around); narrower ones are filtered spectrally.
pub fn gaussian_blur_rows(t: &TomogramGrid, kappa: f64) -> Result<TomogramGrid> {
    if kappa <= 0.0 || !kappa.is_finite() {
        return Err(TomoError::validation(format!("kappa {kappa} must be positive")));
    }
    let grid = t.grid();
    let dx = grid.dx();
    let sigma_max = 1.0 / (kappa * std::f64::consts::SQRT_2);
    if sigma_max < dx {
        log::warn!("blur width {sigma_max:.3e} is below the grid step {dx:.3e}; output is essentially the input");
    }
    let spectral = Spectral::new(grid.n_x(), dx);
    let xs = grid.x_nodes();
    let wx = grid.x_weights();
    let rows: Vec<Vec<f64>> = (0..grid.n_theta())
        .into_par_iter()
        .map(|j| {
            let sigma = grid.theta_nodes()[j].sin().abs() * sigma_max;
            let row = t.row(j);
            if sigma == 0.0 {
                row.to_vec()
            } else if sigma < dx {
                spectral.filter(row, |w| C64::new((-0.5 * w * w * sigma * sigma).exp(), 0.0))
            } else {
                let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
                xs.iter()
                    .map(|&x| {
                        row.iter()
                            .zip(xs)
                            .zip(&wx)
                            .map(|((v, &xb), w)| w * v * norm * (-0.5 * ((x - xb) / sigma).powi(2)).exp())
                            .sum()
                    })
                    .collect()
            }
        })
        .collect();
    let mut it = rows.into_iter();
    t.map_rows(|_, _| it.next().expect("one row per ray"))
}
