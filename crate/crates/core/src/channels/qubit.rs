// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::basis::{KrausSet, Operator};
use crate::kernels::{partial_kernel, total_kernel, PartialKernel, ProcessKernel};
use crate::quadrature::gauss_hermite;
use crate::tomography::{dequantizer_element_general, to_unit_ray};
use crate::{CMatrix, Result, TomoError, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QubitChannel {
    /// Keeps the state with probability `p`, applies `Z` otherwise.
    PhaseFlip { p: f64 },
    /// Decay `|1> -> |0>` with probability `gamma`.
    AmplitudeDamping { gamma: f64 },
}

fn real2(a: [f64; 4]) -> Operator {
    Operator::new(CMatrix::from_row_slice(2, 2, &a.map(|v| C64::new(v, 0.0)))).expect("finite entries")
}

impl QubitChannel {
    pub fn new_phase_flip(p: f64) -> Result<Self> {
        check_unit(p, "p")?;
        Ok(QubitChannel::PhaseFlip { p })
    }

    pub fn new_amplitude_damping(gamma: f64) -> Result<Self> {
        check_unit(gamma, "gamma")?;
        Ok(QubitChannel::AmplitudeDamping { gamma })
    }

    pub fn name(&self) -> String {
        match self {
            QubitChannel::PhaseFlip { p } => format!("phase-flip({p})"),
            QubitChannel::AmplitudeDamping { gamma } => format!("amp-damp({gamma})"),
        }
    }

    /// `A_1, A_2` in the order they are usually listed.
    pub fn kraus(&self) -> KrausSet {
        let ops = match *self {
            QubitChannel::PhaseFlip { p } => {
                let (a, b) = (p.sqrt(), (1.0 - p).sqrt());
                vec![real2([a, 0.0, 0.0, a]), real2([b, 0.0, 0.0, -b])]
            }
            QubitChannel::AmplitudeDamping { gamma } => vec![
                real2([1.0, 0.0, 0.0, (1.0 - gamma).sqrt()]),
                real2([0.0, gamma.sqrt(), 0.0, 0.0]),
            ],
        };
        KrausSet::discrete(ops).expect("qubit Kraus operators are valid")
    }

    pub fn partial_kernels(&self) -> Vec<PartialKernel> {
        self.kraus().iter().map(|(a, l, w)| partial_kernel(a, w, l.clone())).collect()
    }

    pub fn kernel(&self) -> ProcessKernel {
        total_kernel(&self.kraus(), self.name())
    }

    /// Closed-form kernel of Kraus operator `index` (0-based, listing order):
    /// the coefficient of `δ(x̄ - x)` and a regular part built from the basis
    /// tomograms `T_0`, `T_1` and their moments `∫ T_m(X̄ + X') e^{-iX'} dX'`.
    pub fn closed_form(&self, index: usize) -> Result<ClosedFormKernel> {
        // terms (c, m, n): c · T_m(x) · (1/2π) ∫ T_n(X̄+X') e^{-iX'} dX'
        let (delta, terms) = match (*self, index) {
            (QubitChannel::PhaseFlip { p }, 0) => (p, vec![]),
            (QubitChannel::PhaseFlip { p }, 1) => (-(1.0 - p), vec![(2.0 * (1.0 - p), 0, 0), (2.0 * (1.0 - p), 1, 1)]),
            // diag(1, s): s δ + (1 - s) T_0 M_0 + (1 - s) (1 - s)... expanded below
            (QubitChannel::AmplitudeDamping { gamma }, 0) => {
                let s = (1.0 - gamma).sqrt();
                (s, vec![(1.0 - s, 0, 0), (1.0 - gamma - s, 1, 1)])
            }
            (QubitChannel::AmplitudeDamping { gamma }, 1) => (0.0, vec![(gamma, 0, 1)]),
            _ => return Err(TomoError::validation(format!("qubit channels have two Kraus operators, not {}", index + 1))),
        };
        Ok(ClosedFormKernel { delta, terms })
    }
}

fn check_unit(v: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(TomoError::validation(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

/// `delta · δ(x̄ - x) + sum c · T_m(x) · (1/2π) ∫ T_n(X̄ + X') e^{-iX'} dX'`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormKernel {
    pub delta: f64,
    pub terms: Vec<(f64, usize, usize)>,
}

/// `(1/2π) ∫ T_n(X̄ + X', μ̄, ν̄) e^{-iX'} dX'` by Gauss-Hermite quadrature
/// of the Fock tomogram `psi_n(u)² / λ` on the ray.
pub fn basis_tomogram_moment(n: usize, xbar: [f64; 3]) -> Result<C64> {
    let (lambda, _, _) = to_unit_ray(xbar[0], xbar[1], xbar[2])
        .ok_or_else(|| TomoError::Generalized("moment at μ̄ = ν̄ = 0".into()))?;
    // X̄ + X' = λu: ∫ psi_n(u)² e^{-i(λu - X̄)} du
    let rule = gauss_hermite(96);
    let mut acc = C64::new(0.0, 0.0);
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let h = crate::basis::hermite_function(n, u);
        // weight e^{-u²} is carried by the rule
        acc += C64::from_polar(w * h * h * (u * u).exp(), -(lambda * u - xbar[0]));
    }
    Ok(acc / (2.0 * PI))
}

impl ClosedFormKernel {
    /// Regular part at `(x̄, x)`.
    pub fn regular(&self, xbar: [f64; 3], x: [f64; 3]) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for &(c, m, n) in &self.terms {
            let tm = dequantizer_element_general(m, m, x[0], x[1], x[2])?.re;
            acc += basis_tomogram_moment(n, xbar)? * (c * tm);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::tensor_index;

    fn truncated_delta(xbar: [f64; 3], x: [f64; 3]) -> C64 {
        // δ(x̄ - x) restricted to the qubit: sum_jk D_jk(x̄) U_kj(x)
        let id = partial_kernel(&Operator::identity(2), 1.0, crate::basis::OutcomeLabel::Index(0));
        let m = id.coefficients();
        let d = crate::basis::displacement_matrix(2, xbar[1], xbar[2]) * C64::from_polar(1.0 / (2.0 * PI), xbar[0]);
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    for i in 0..2 {
                        let u = dequantizer_element_general(l, i, x[0], x[1], x[2]).unwrap();
                        acc += m[tensor_index(2, j, k, l, i)] * d[(j, k)] * u;
                    }
                }
            }
        }
        acc
    }

    #[test]
    fn closed_forms_match_tensor_kernels() {
        let points = [([0.3, 0.7, -0.4], [0.2, 0.6, 0.8]), ([-1.0, 0.2, 1.1], [1.5, -1.0, 0.3]), ([0.0, 1.3, 0.0], [0.4, 0.0, 1.0])];
        for ch in [QubitChannel::PhaseFlip { p: 0.3 }, QubitChannel::AmplitudeDamping { gamma: 0.45 }] {
            let parts = ch.partial_kernels();
            for (idx, pk) in parts.iter().enumerate() {
                let cf = ch.closed_form(idx).unwrap();
                for &(xb, x) in &points {
                    let tensor = if pk.identity_weight > 0.0 {
                        truncated_delta(xb, x) * pk.identity_weight
                    } else {
                        pk.evaluate(xb, x).unwrap()
                    };
                    let closed = cf.regular(xb, x).unwrap() + truncated_delta(xb, x) * cf.delta;
                    assert!((tensor - closed).norm() < 1e-10, "{} A{}: {tensor} vs {closed}", ch.name(), idx + 1);
                }
            }
        }
    }

    #[test]
    fn moment_is_quantizer_diagonal() {
        let xb = [0.4, -0.9, 0.5];
        for n in 0..3 {
            let q = crate::tomography::quantizer_element(n, n, xb[0], xb[1], xb[2]);
            assert!((basis_tomogram_moment(n, xb).unwrap() - q).norm() < 1e-12);
        }
    }

    #[test]
    fn endpoints_are_identity() {
        for ch in [QubitChannel::PhaseFlip { p: 1.0 }, QubitChannel::AmplitudeDamping { gamma: 0.0 }] {
            let k = ch.kraus();
            assert!(k.operators()[0].max_abs_diff(&Operator::identity(2)) < 1e-15);
            assert!(crate::basis::max_abs(k.operators()[1].matrix()) < 1e-15);
        }
        assert!(QubitChannel::new_phase_flip(1.2).is_err());
    }
}
