// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Result, TomoError};

/// Sampling of the unit circle `mu = cos(theta), nu = sin(theta)`: uniform
/// `X` nodes on `[-x_max, x_max]` and uniform `theta` nodes on `[0, pi)`.
///
/// Rays with `theta` in `[pi, 2pi)` are reached through
/// `T(X, -mu, -nu) = T(-X, mu, nu)`, other radii through homogeneity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RayGridParams", into = "RayGridParams")]
pub struct RayGrid {
    x_max: f64,
    x_nodes: Vec<f64>,
    theta_nodes: Vec<f64>,
}

/// Serialised form of a [`RayGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayGridParams {
    pub x_max: f64,
    pub n_x: usize,
    pub n_theta: usize,
}

impl Default for RayGridParams {
    fn default() -> Self {
        RayGridParams { x_max: 8.0, n_x: 257, n_theta: 64 }
    }
}

impl TryFrom<RayGridParams> for RayGrid {
    type Error = TomoError;

    fn try_from(p: RayGridParams) -> Result<Self> {
        RayGrid::new(p.x_max, p.n_x, p.n_theta)
    }
}

impl From<RayGrid> for RayGridParams {
    fn from(g: RayGrid) -> Self {
        g.params()
    }
}

impl Default for RayGrid {
    fn default() -> Self {
        RayGridParams::default().try_into().expect("default grid is valid")
    }
}

impl RayGrid {
    pub fn new(x_max: f64, n_x: usize, n_theta: usize) -> Result<Self> {
        if x_max <= 0.0 || !x_max.is_finite() {
            return Err(TomoError::validation(format!("x_max {x_max} must be positive")));
        }
        if n_x < 3 || n_x.is_multiple_of(2) {
            return Err(TomoError::validation(format!("n_x {n_x} must be odd and >= 3")));
        }
        if n_theta == 0 {
            return Err(TomoError::validation("n_theta must be >= 1"));
        }
        let h = 2.0 * x_max / (n_x - 1) as f64;
        let mid = (n_x - 1) / 2;
        // symmetric construction keeps X = 0 exact and x_nodes[i] = -x_nodes[n-1-i]
        let x_nodes = (0..n_x).map(|i| (i as f64 - mid as f64) * h).collect();
        let theta_nodes = (0..n_theta).map(|j| PI * j as f64 / n_theta as f64).collect();
        Ok(RayGrid { x_max, x_nodes, theta_nodes })
    }

    pub fn params(&self) -> RayGridParams {
        RayGridParams { x_max: self.x_max, n_x: self.n_x(), n_theta: self.n_theta() }
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_x(&self) -> usize {
        self.x_nodes.len()
    }

    pub fn n_theta(&self) -> usize {
        self.theta_nodes.len()
    }

    pub fn len(&self) -> usize {
        self.n_x() * self.n_theta()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.x_max / (self.n_x() - 1) as f64
    }

    pub fn dtheta(&self) -> f64 {
        PI / self.n_theta() as f64
    }

    pub fn x_nodes(&self) -> &[f64] {
        &self.x_nodes
    }

    pub fn theta_nodes(&self) -> &[f64] {
        &self.theta_nodes
    }

    /// Trapezoid weight of X node `i`.
    pub fn x_weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n_x() {
            0.5 * self.dx()
        } else {
            self.dx()
        }
    }

    pub fn x_weights(&self) -> Vec<f64> {
        (0..self.n_x()).map(|i| self.x_weight(i)).collect()
    }

    /// Index of the X node nearest to `x`, when `x` lies on a node up to
    /// round-off.
    pub(crate) fn snap_x(&self, x: f64) -> Option<usize> {
        let f = (x + self.x_max) / self.dx();
        let r = f.round();
        if (f - r).abs() < 1e-9 && r >= 0.0 && (r as usize) < self.n_x() {
            Some(r as usize)
        } else {
            None
        }
    }

    /// Row-major index of `(theta_j, X_i)`.
    pub fn index(&self, j: usize, i: usize) -> usize {
        j * self.n_x() + i
    }
}

/// Maps an arbitrary `(X, mu, nu)` with `(mu, nu) != 0` to
/// `(scale, X_unit, theta)` so that `f(X, mu, nu) = f(X_unit, theta) / scale`
/// with `theta` in `[0, pi)`.
pub fn to_unit_ray(x: f64, mu: f64, nu: f64) -> Option<(f64, f64, f64)> {
    let lambda = mu.hypot(nu);
    if lambda == 0.0 {
        return None;
    }
    let mut theta = nu.atan2(mu);
    let mut xu = x / lambda;
    if theta < 0.0 {
        theta += PI;
        xu = -xu;
    }
    if theta >= PI {
        theta -= PI;
        xu = -xu;
    }
    Some((lambda, xu, theta))
}
