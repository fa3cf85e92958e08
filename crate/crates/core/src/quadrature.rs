// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Quadrature rules: Gauss-Legendre, Gauss-Hermite, uniform trapezoid, and
//! the cosine-taper window used on truncated radial integrals.

use std::f64::consts::PI;

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss-Legendre rule with `n` nodes on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Rule {
    assert!(n > 0, "Gauss-Legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let legendre = |z: f64| {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            (p1, n as f64 * (z * p1 - p2) / (z * z - 1.0))
        };
        for _ in 0..100 {
            let (p, dp) = legendre(z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let dp = legendre(z).1;
        nodes[i] = mid - half * z;
        nodes[n - 1 - i] = mid + half * z;
        let w = 2.0 * half / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

/// Composite Gauss-Legendre: `panels` equal panels of `per_panel` nodes.
pub fn composite_gauss_legendre(panels: usize, per_panel: usize, a: f64, b: f64) -> Rule {
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * per_panel);
    let mut weights = Vec::with_capacity(panels * per_panel);
    for p in 0..panels {
        let lo = a + h * p as f64;
        let r = gauss_legendre(per_panel, lo, lo + h);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    Rule { nodes, weights }
}

/// Gauss-Hermite rule for `∫ f(x) e^{-x²} dx` with `n` nodes, ascending.
pub fn gauss_hermite(n: usize) -> Rule {
    assert!(n > 0, "Gauss-Hermite needs at least one node");
    let pim4 = PI.powf(-0.25);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 1.0;
        for _ in 0..200 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = (j + 1) as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 3e-14 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    nodes.reverse();
    weights.reverse();
    Rule { nodes, weights }
}

/// Gauss-Hermite nodes with weights rescaled for plain `∫ f(x) dx`
/// (weights multiplied by `e^{x²}`). Suitable for integrands carrying their
/// own Gaussian decay, such as products of oscillator wavefunctions.
pub fn gauss_hermite_plain(n: usize) -> Rule {
    let mut r = gauss_hermite(n);
    for (w, &x) in r.weights.iter_mut().zip(&r.nodes) {
        *w *= (x * x).exp();
    }
    r
}

/// Uniform nodes `a..=b` with composite trapezoid weights.
pub fn trapezoid(n: usize, a: f64, b: f64) -> Rule {
    assert!(n >= 2, "trapezoid needs at least two nodes");
    let h = (b - a) / (n - 1) as f64;
    let nodes = (0..n).map(|i| a + h * i as f64).collect();
    let mut weights = vec![h; n];
    weights[0] = 0.5 * h;
    weights[n - 1] = 0.5 * h;
    Rule { nodes, weights }
}

/// Cosine taper: 1 below `(1 - fraction) * cutoff`, falling smoothly to 0 at
/// `cutoff`. `fraction == 0` is a hard cut.
pub fn cosine_taper(k: f64, cutoff: f64, fraction: f64) -> f64 {
    let k = k.abs();
    if k >= cutoff {
        return 0.0;
    }
    let start = (1.0 - fraction) * cutoff;
    if fraction <= 0.0 || k <= start {
        1.0
    } else {
        0.5 * (1.0 + (PI * (k - start) / (cutoff - start)).cos())
    }
}
