// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Result, TomoError, C64};

/// Phase-space point `x = (X, μ, ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub mu: f64,
    pub nu: f64,
}

impl PhasePoint {
    pub fn new(x: f64, mu: f64, nu: f64) -> Self {
        PhasePoint { x, mu, nu }
    }
}

/// `Tr{D(x₁) D(x̄) D(x₂) U(x)}` in structural form: a phase prefactor times
/// `δ(c)` with `c = (μ̄ + μ₁ + μ₂) ν - (ν̄ + ν₁ + ν₂) μ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleTraceValue {
    /// Only present on the constraint surface (and, for `μ = ν = 0`, when
    /// `X = 0`).
    pub prefactor: Option<C64>,
    /// `∂c/∂(μ̄, ν̄, μ₁, ν₁, μ₂, ν₂, μ, ν)`.
    pub constraint: [f64; 8],
    /// `c` itself.
    pub constraint_value: f64,
    /// `(1/2)(μ̄(ν₁ - ν₂) - (μ₁ - μ₂)ν̄ - μ₁ν₂ + μ₂ν₁)`.
    pub phase_exponent: f64,
}

impl TripleTraceValue {
    pub fn on_surface(&self) -> bool {
        self.prefactor.is_some()
    }
}

pub fn triple_trace(x1: PhasePoint, xbar: PhasePoint, x2: PhasePoint, x: PhasePoint) -> TripleTraceValue {
    let sm = xbar.mu + x1.mu + x2.mu;
    let sn = xbar.nu + x1.nu + x2.nu;
    let c = sm * x.nu - sn * x.mu;
    let phase_exponent =
        0.5 * (xbar.mu * (x1.nu - x2.nu) - (x1.mu - x2.mu) * xbar.nu - x1.mu * x2.nu + x2.mu * x1.nu);
    let scale = 1.0 + (sm.abs() + sn.abs()) * (x.mu.abs() + x.nu.abs());
    let on_surface = c.abs() <= 1e-12 * scale;
    // X (ν̄+ν₁+ν₂)/ν; on the surface this equals X (μ̄+μ₁+μ₂)/μ
    let ratio = if !on_surface {
        None
    } else if x.nu != 0.0 && x.nu.abs() >= x.mu.abs() {
        Some(x.x * sn / x.nu)
    } else if x.mu != 0.0 {
        Some(x.x * sm / x.mu)
    } else if x.x == 0.0 {
        Some(0.0)
    } else {
        None
    };
    let prefactor = ratio.map(|r| {
        C64::from_polar((2.0 * PI).powi(-3), xbar.x + x1.x + x2.x - r + phase_exponent)
    });
    TripleTraceValue {
        prefactor,
        constraint: [x.nu, -x.mu, x.nu, -x.mu, x.nu, -x.mu, -sn, sm],
        constraint_value: c,
        phase_exponent,
    }
}

/// The X-integrated form `∫ f_{U(x̄)}(x) e^{-iX} dX = δ(μ̄ν - μν̄) e^{-iX̄μ/μ̄}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularizedDelta {
    /// `μ̄ν - μν̄`.
    pub argument: f64,
    /// Phase multiplying the delta; zero off the constraint.
    pub phase: C64,
}

/// Symbol of the dequantizer `U(x̄)` as a function of `x`. It diverges
/// pointwise and is usable only through its X-integrated form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DequantizerSymbol {
    pub at: PhasePoint,
}

impl DequantizerSymbol {
    pub fn new(at: PhasePoint) -> Self {
        DequantizerSymbol { at }
    }

    pub fn evaluate(&self, _x: PhasePoint) -> Result<C64> {
        Err(TomoError::Generalized(
            "the dequantizer symbol is a distribution; use DequantizerSymbol::regularized".into(),
        ))
    }

    pub fn regularized(&self, mu: f64, nu: f64) -> RegularizedDelta {
        let b = self.at;
        let argument = b.mu * nu - mu * b.nu;
        let scale = 1.0 + (b.mu.abs() + b.nu.abs()) * (mu.abs() + nu.abs());
        if argument.abs() > 1e-12 * scale || (b.mu == 0.0 && b.nu == 0.0) {
            return RegularizedDelta { argument, phase: C64::new(0.0, 0.0) };
        }
        // on the line (μ, ν) = s (μ̄, ν̄)
        let s = if b.mu.abs() >= b.nu.abs() { mu / b.mu } else { nu / b.nu };
        RegularizedDelta { argument, phase: C64::from_polar(1.0, -b.x * s) }
    }

    /// `∫ g(μ, ν) δ(μ̄ν - μν̄) e^{-iX̄μ/μ̄} dμ dν = ∫ g(s μ̄, s ν̄) e^{-iX̄ s} ds`
    /// on the given rule in `s`.
    pub fn smeared(&self, g: impl Fn(f64, f64) -> f64, s_nodes: &[f64], s_weights: &[f64]) -> Result<C64> {
        let b = self.at;
        if b.mu == 0.0 && b.nu == 0.0 {
            return Err(TomoError::Generalized("dequantizer at μ̄ = ν̄ = 0".into()));
        }
        Ok(s_nodes
            .iter()
            .zip(s_weights)
            .map(|(&s, &w)| C64::from_polar(w * g(s * b.mu, s * b.nu), -b.x * s))
            .sum())
    }
}
