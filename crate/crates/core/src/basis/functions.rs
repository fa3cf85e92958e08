// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Oscillator eigenfunctions and matrix elements of the Weyl exponential
//! `exp(-i mu q - i nu p)` in the number basis.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::{CMatrix, Result, TomoError, C64};

/// Orthonormal oscillator eigenfunction `psi_n(q)` (hbar = m = omega = 1).
///
/// Upward three-term recurrence on the normalised functions; no factorials
/// are formed, so the evaluation stays finite for large `n`.
pub fn hermite_function(n: usize, q: f64) -> f64 {
    hermite_functions(n + 1, q)[n]
}

/// Checked entry point for indices arriving from untyped input.
pub fn try_hermite_function(n: i64, q: f64) -> Result<f64> {
    if n < 0 {
        return Err(TomoError::Domain(format!("negative basis index {n}")));
    }
    if !q.is_finite() {
        return Err(TomoError::Domain(format!("non-finite coordinate {q}")));
    }
    Ok(hermite_function(n as usize, q))
}

/// `psi_0(q) ..= psi_{count-1}(q)`.
pub fn hermite_functions(count: usize, q: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let psi0 = PI.powf(-0.25) * (-0.5 * q * q).exp();
    out.push(psi0);
    if count == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * q * psi0);
    for n in 1..count - 1 {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * q * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Generalised Laguerre polynomials `L_k^{(alpha)}(x)` for `k = 0..count`.
fn laguerre_all(count: usize, alpha: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(1.0);
    if count == 1 {
        return out;
    }
    out.push(1.0 + alpha - x);
    for k in 1..count - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Real displacement matrix `<n| D(r) |m>` for real amplitude `r`,
/// row-major `dim x dim`.
///
/// For `n >= m` the element is `sqrt(m!/n!) r^(n-m) e^(-r²/2) L_m^(n-m)(r²)`;
/// the upper triangle follows from `<n|D(r)|m> = (-1)^(n-m) <m|D(r)|n>`.
pub fn displacement_real(dim: usize, r: f64) -> Vec<f64> {
    let x = r * r;
    let gauss = (-0.5 * x).exp();
    let mut d = vec![0.0; dim * dim];
    for delta in 0..dim {
        let lag = laguerre_all(dim - delta, delta as f64, x);
        // sqrt(m!/(m+delta)!) r^delta, built incrementally in m
        let mut pref: f64 = (1..=delta).map(|k| r / (k as f64).sqrt()).product();
        for m in 0..dim - delta {
            if m > 0 {
                pref *= (m as f64 / (m + delta) as f64).sqrt();
            }
            let n = m + delta;
            let v = pref * gauss * lag[m];
            d[n * dim + m] = v;
            d[m * dim + n] = if delta % 2 == 0 { v } else { -v };
        }
    }
    d
}

/// Coherent amplitude of the Weyl exponential `exp(-i mu q - i nu p)`,
/// i.e. the `alpha` with `exp(-i mu q - i nu p) = D(alpha)`.
pub fn weyl_amplitude(mu: f64, nu: f64) -> C64 {
    C64::new(nu, -mu) * FRAC_1_SQRT_2
}

/// `<n| exp(-i mu q - i nu p) |m>` in closed form.
pub fn displacement_element(n: usize, m: usize, mu: f64, nu: f64) -> C64 {
    let dim = n.max(m) + 1;
    let alpha = weyl_amplitude(mu, nu);
    let (r, phi) = alpha.to_polar();
    let d = displacement_real(dim, r);
    d[n * dim + m] * C64::from_polar(1.0, (n as f64 - m as f64) * phi)
}

/// Full `dim x dim` block of `exp(-i mu q - i nu p)`.
pub fn displacement_matrix(dim: usize, mu: f64, nu: f64) -> CMatrix {
    let (r, phi) = weyl_amplitude(mu, nu).to_polar();
    let d = displacement_real(dim, r);
    CMatrix::from_fn(dim, dim, |n, m| {
        d[n * dim + m] * C64::from_polar(1.0, (n as f64 - m as f64) * phi)
    })
}
