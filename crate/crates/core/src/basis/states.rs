// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{DensityMatrix, HilbertSpec, Operator};
use crate::{tolerances, CMatrix, Result, TomoError, C64};

/// Descriptor of a state to prepare in the truncated basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateKind {
    Fock { n: usize },
    /// Coherent state `|alpha>`, renormalised after truncation.
    Coherent { re: f64, im: f64 },
    /// Thermal state with mean occupation `nbar`, renormalised after truncation.
    Thermal { nbar: f64 },
    Mixture { components: Vec<(f64, StateKind)> },
}

/// A prepared state plus the weight discarded by truncation.
#[derive(Debug, Clone)]
pub struct PreparedState {
    pub density: DensityMatrix,
    /// Fraction of the untruncated state lying outside the basis.
    pub leakage: f64,
}

pub fn make_state(spec: &HilbertSpec, kind: &StateKind) -> Result<PreparedState> {
    let dim = spec.dim();
    let prepared = match kind {
        StateKind::Fock { n } => {
            if *n >= dim {
                return Err(TomoError::validation(format!("fock {n} outside dimension {dim}")));
            }
            let mut p = vec![0.0; dim];
            p[*n] = 1.0;
            PreparedState { density: DensityMatrix::from_diagonal(&p)?, leakage: 0.0 }
        }
        StateKind::Coherent { re, im } => {
            let alpha = C64::new(*re, *im);
            if !alpha.re.is_finite() || !alpha.im.is_finite() {
                return Err(TomoError::validation("non-finite coherent amplitude"));
            }
            // c_n = e^{-|a|²/2} a^n / sqrt(n!)
            let mut amps = Vec::with_capacity(dim);
            let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
            for n in 0..dim {
                if n > 0 {
                    c = c * alpha / (n as f64).sqrt();
                }
                amps.push(c);
            }
            let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
            PreparedState { density: DensityMatrix::pure(&amps)?, leakage: (1.0 - kept).max(0.0) }
        }
        StateKind::Thermal { nbar } => {
            if *nbar < 0.0 || !nbar.is_finite() {
                return Err(TomoError::validation(format!("thermal occupation {nbar} < 0")));
            }
            let ratio = nbar / (nbar + 1.0);
            let p: Vec<f64> = (0..dim).map(|n| ratio.powi(n as i32) / (nbar + 1.0)).collect();
            let kept: f64 = p.iter().sum();
            let p: Vec<f64> = p.iter().map(|x| x / kept).collect();
            PreparedState { density: DensityMatrix::from_diagonal(&p)?, leakage: (1.0 - kept).max(0.0) }
        }
        StateKind::Mixture { components } => {
            if components.is_empty() {
                return Err(TomoError::validation("empty mixture"));
            }
            let total: f64 = components.iter().map(|(w, _)| *w).sum();
            if components.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-10 {
                return Err(TomoError::validation(format!(
                    "mixture weights must be >= 0 and sum to 1 (sum {total})"
                )));
            }
            let mut acc = CMatrix::zeros(dim, dim);
            let mut leakage = 0.0;
            for (w, k) in components {
                let part = make_state(spec, k)?;
                acc += part.density.matrix() * C64::new(*w, 0.0);
                leakage += w * part.leakage;
            }
            // weights sum to 1 only within 1e-10; restore the exact trace
            let tr = acc.trace().re;
            acc /= C64::new(tr, 0.0);
            PreparedState {
                density: DensityMatrix::new(Operator::new(super::hermitize(&acc))?)?,
                leakage,
            }
        }
    };
    if prepared.leakage > tolerances::LEAKAGE_WARN {
        log::warn!(
            "state {:?} leaks {:.3e} of its weight outside dimension {dim}",
            kind,
            prepared.leakage
        );
    }
    Ok(prepared)
}
