// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Process kernels: Kraus symbols, partial and total kernels, their action on
//! tomograms, the completeness check on symbol sets and the structural
//! (delta-bearing) objects of the formalism.

mod brute;
mod completeness;
mod structural;
mod triple;

pub use brute::{apply_kernel_quadrature, QuadratureRoute};
pub use completeness::{completeness_check, CompletenessReport, SmearingSpec};
pub use structural::{gaussian_blur_rows, shift_rows, StructuralKernel};
pub use triple::{triple_trace, DequantizerSymbol, PhasePoint, RegularizedDelta, TripleTraceValue};

use serde::Serialize;

use crate::basis::{displacement_matrix, KrausSet, Operator, OutcomeLabel};
use crate::tomography::{
    dequantizer_element_general, reconstruction_moments, symbol_from_operator, tomogram_from_hermitian,
    RayGrid, ReconstructionParams, SymbolGrid, SymbolKind, TomogramGrid,
};
use crate::{CMatrix, Result, TomoError, C64};

/// Flat index of `M[(j,k),(l,i)]` in a kernel tensor of dimension `n`.
#[inline]
pub fn tensor_index(n: usize, j: usize, k: usize, l: usize, i: usize) -> usize {
    ((j * n + k) * n + l) * n + i
}

/// Symbols of every Kraus operator on `grid`.
pub fn kraus_symbols(kraus: &KrausSet, grid: &RayGrid) -> Vec<SymbolGrid> {
    kraus
        .iter()
        .enumerate()
        .map(|(a, (op, label, _))| {
            let mut s = symbol_from_operator(op, grid);
            s.tag = format!("A[{a}] {label:?}");
            s
        })
        .collect()
}

/// `c` when `A = c·1` up to round-off.
pub(crate) fn identity_multiple(a: &Operator) -> Option<C64> {
    let m = a.matrix();
    let c = m[(0, 0)];
    let scale = crate::basis::max_abs(m).max(1e-300);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let expect = if i == j { c } else { C64::new(0.0, 0.0) };
            if (m[(i, j)] - expect).norm() > 1e-12 * scale {
                return None;
            }
        }
    }
    Some(c)
}

/// One outcome's slice `w A_ij conj(A_lk)` of the kernel tensor.
#[derive(Debug, Clone)]
pub struct PartialKernel {
    pub label: OutcomeLabel,
    pub weight: f64,
    dim: usize,
    coefficients: Vec<C64>,
    /// `w |c|²` when the Kraus operator is `c·1`, whose kernel is `w |c|² δ(x̄ - x)`.
    pub identity_weight: f64,
}

pub fn partial_kernel(a: &Operator, weight: f64, label: OutcomeLabel) -> PartialKernel {
    let n = a.dim();
    let m = a.matrix();
    let mut coefficients = vec![C64::new(0.0, 0.0); n.pow(4)];
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                let alk = m[(l, k)].conj() * weight;
                for i in 0..n {
                    coefficients[tensor_index(n, j, k, l, i)] = m[(i, j)] * alk;
                }
            }
        }
    }
    let identity_weight = identity_multiple(a).map_or(0.0, |c| weight * c.norm_sqr());
    PartialKernel { label, weight, dim: n, coefficients, identity_weight }
}

impl PartialKernel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn kind(&self) -> SymbolKind {
        if self.identity_weight > 0.0 {
            SymbolKind::Generalized
        } else {
            SymbolKind::Regular
        }
    }

    /// `K(x̄, x) = sum M D_jk(x̄) U_li(x)`, with `x̄ = (X̄, μ̄, ν̄)` and
    /// `x = (X, μ, ν)`.
    pub fn evaluate(&self, xbar: [f64; 3], x: [f64; 3]) -> Result<C64> {
        if self.kind() == SymbolKind::Generalized {
            return Err(TomoError::Generalized(format!(
                "partial kernel {:?} contains {}·δ(x̄ - x)",
                self.label, self.identity_weight
            )));
        }
        evaluate_tensor(self.dim, &self.coefficients, xbar, x)
    }
}

fn evaluate_tensor(n: usize, m: &[C64], xbar: [f64; 3], x: [f64; 3]) -> Result<C64> {
    let d = displacement_matrix(n, xbar[1], xbar[2]) * C64::from_polar(1.0 / (2.0 * std::f64::consts::PI), xbar[0]);
    let mut acc = C64::new(0.0, 0.0);
    for l in 0..n {
        for i in 0..n {
            let u = dequantizer_element_general(l, i, x[0], x[1], x[2])?;
            let mut g = C64::new(0.0, 0.0);
            for j in 0..n {
                for k in 0..n {
                    g += m[tensor_index(n, j, k, l, i)] * d[(j, k)];
                }
            }
            acc += g * u;
        }
    }
    Ok(acc)
}

/// How a kernel is stored.
#[derive(Debug, Clone)]
pub enum KernelForm {
    /// Coefficient tensor over `D_jk(x̄) U_li(x)`.
    Tensor(Vec<C64>),
    /// Exact per-ray action of a delta-bearing continuous-variable kernel.
    Structural(StructuralKernel),
}

/// Kernel of a whole process.
#[derive(Debug, Clone)]
pub struct ProcessKernel {
    pub name: String,
    dim: Option<usize>,
    form: KernelForm,
    pub kind: SymbolKind,
    /// Weight of the `δ(x̄ - x)` component carried by Kraus operators
    /// proportional to the identity.
    pub identity_weight: f64,
    pub completeness_residual: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelSummary {
    pub name: String,
    pub dim: Option<usize>,
    pub kind: SymbolKind,
    pub identity_weight: f64,
    pub completeness_residual: Option<f64>,
    pub warnings: Vec<String>,
    pub structural: Option<StructuralKernel>,
}

pub fn total_kernel(kraus: &KrausSet, name: impl Into<String>) -> ProcessKernel {
    // One partial at a time: fine outcome grids would not fit otherwise.
    let n = kraus.dim();
    let mut m = vec![C64::new(0.0, 0.0); n.pow(4)];
    let mut identity_weight = 0.0;
    for (a, label, w) in kraus.iter() {
        let p = partial_kernel(a, w, label.clone());
        for (acc, c) in m.iter_mut().zip(&p.coefficients) {
            *acc += c;
        }
        identity_weight += p.identity_weight;
    }
    let mut k = ProcessKernel::from_tensor(n, m, identity_weight, name);
    if !kraus.is_complete() {
        k.warnings.push(format!(
            "Kraus set is incomplete: |sum A†A - 1| = {:.3e} > {:.1e}",
            kraus.completeness_residual(),
            kraus.tol_complete()
        ));
    }
    k
}

impl ProcessKernel {
    pub fn from_partials(dim: usize, partials: &[PartialKernel], name: impl Into<String>) -> ProcessKernel {
        let mut m = vec![C64::new(0.0, 0.0); dim.pow(4)];
        let mut identity_weight = 0.0;
        for p in partials {
            assert_eq!(p.dim, dim, "partial kernel dimension mismatch");
            for (acc, c) in m.iter_mut().zip(&p.coefficients) {
                *acc += c;
            }
            identity_weight += p.identity_weight;
        }
        Self::from_tensor(dim, m, identity_weight, name)
    }

    fn from_tensor(dim: usize, m: Vec<C64>, identity_weight: f64, name: impl Into<String>) -> ProcessKernel {
        let kind = if identity_weight > 0.0 { SymbolKind::Generalized } else { SymbolKind::Regular };
        let mut k = ProcessKernel {
            name: name.into(),
            dim: Some(dim),
            form: KernelForm::Tensor(m),
            kind,
            identity_weight,
            completeness_residual: None,
            warnings: Vec::new(),
        };
        k.completeness_residual = k.trace_contraction_residual();
        k
    }

    pub fn structural(kernel: StructuralKernel, name: impl Into<String>) -> ProcessKernel {
        let identity_weight = match &kernel {
            StructuralKernel::Identity => 1.0,
            _ => 0.0,
        };
        ProcessKernel {
            name: name.into(),
            dim: None,
            form: KernelForm::Structural(kernel),
            kind: SymbolKind::Generalized,
            identity_weight,
            completeness_residual: Some(0.0),
            warnings: Vec::new(),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn form(&self) -> &KernelForm {
        &self.form
    }

    pub fn tensor(&self) -> Option<&[C64]> {
        match &self.form {
            KernelForm::Tensor(m) => Some(m),
            KernelForm::Structural(_) => None,
        }
    }

    pub fn summary(&self) -> KernelSummary {
        KernelSummary {
            name: self.name.clone(),
            dim: self.dim,
            kind: self.kind,
            identity_weight: self.identity_weight,
            completeness_residual: self.completeness_residual,
            warnings: self.warnings.clone(),
            structural: match &self.form {
                KernelForm::Structural(s) => Some(s.clone()),
                KernelForm::Tensor(_) => None,
            },
        }
    }

    /// `max |sum_i M[(j,k),(i,i)] - δ_jk|`: trace preservation.
    fn trace_contraction_residual(&self) -> Option<f64> {
        let (n, m) = (self.dim?, self.tensor()?);
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                let s: C64 = (0..n).map(|i| m[tensor_index(n, j, k, i, i)]).sum();
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        Some(worst)
    }

    /// `max |M[(j,k),(l,i)] - conj M[(k,j),(i,l)]|`.
    pub fn hermiticity_residual(&self) -> Option<f64> {
        let (n, m) = (self.dim?, self.tensor()?);
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for i in 0..n {
                        let d = m[tensor_index(n, j, k, l, i)] - m[tensor_index(n, k, j, i, l)].conj();
                        worst = worst.max(d.norm());
                    }
                }
            }
        }
        Some(worst)
    }

    /// Pointwise kernel value; refused for generalized kernels.
    pub fn evaluate(&self, xbar: [f64; 3], x: [f64; 3]) -> Result<C64> {
        if self.kind == SymbolKind::Generalized {
            return Err(TomoError::Generalized(format!(
                "kernel '{}' contains delta components; use its structural form",
                self.name
            )));
        }
        match &self.form {
            KernelForm::Tensor(m) => evaluate_tensor(self.dim.expect("tensor kernels have a dimension"), m, xbar, x),
            KernelForm::Structural(_) => unreachable!("structural kernels are generalized"),
        }
    }

    /// `rho'_il = sum_jk M[(j,k),(l,i)] R_jk`.
    pub fn contract(&self, r: &CMatrix) -> Result<CMatrix> {
        let m = self
            .tensor()
            .ok_or_else(|| TomoError::validation(format!("kernel '{}' has no coefficient tensor", self.name)))?;
        let n = self.dim.expect("tensor kernels have a dimension");
        if r.nrows() != n {
            return Err(TomoError::validation(format!("moments of dim {} for a kernel of dim {n}", r.nrows())));
        }
        let mut out = CMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                let rjk = r[(j, k)];
                if rjk == C64::new(0.0, 0.0) {
                    continue;
                }
                for l in 0..n {
                    for i in 0..n {
                        out[(i, l)] += m[tensor_index(n, j, k, l, i)] * rjk;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `T'(x) = ∫ T(x̄) K(x̄, x) dx̄`.
///
/// Tensor kernels: the `x̄` integral against `D_jk` is the reconstruction
/// functional, so the reconstruction moments of `T` are contracted with the
/// tensor and the result is mapped back with the dequantizer. Structural
/// kernels act per ray.
pub fn apply_kernel(t: &TomogramGrid, kernel: &ProcessKernel, params: &ReconstructionParams) -> Result<TomogramGrid> {
    let out = match kernel.form() {
        KernelForm::Tensor(_) => {
            let n = kernel.dim.expect("tensor kernels have a dimension");
            let values: Vec<C64> = t.values().iter().map(|&v| C64::new(v, 0.0)).collect();
            let r = reconstruction_moments(t.grid(), &values, n, params)?;
            let rho = kernel.contract(&r)?;
            let rho = crate::basis::hermitize(&rho);
            let mut o = tomogram_from_hermitian(&Operator::new(rho)?, t.grid())?;
            o.provenance = t.provenance.clone();
            o
        }
        KernelForm::Structural(s) => s.apply(t)?,
    };
    Ok(out.with_provenance(format!("kernel {}", kernel.name)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{apply_channel_oracle, DensityMatrix};
    use crate::tomography::tomogram_from_density;

    fn amp_damp(gamma: f64) -> KrausSet {
        let a1 = Operator::new(CMatrix::from_row_slice(2, 2, &[
            C64::new(1.0, 0.0), C64::new(0.0, 0.0),
            C64::new(0.0, 0.0), C64::new((1.0 - gamma).sqrt(), 0.0),
        ]))
        .unwrap();
        let a2 = Operator::new(CMatrix::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0), C64::new(gamma.sqrt(), 0.0),
            C64::new(0.0, 0.0), C64::new(0.0, 0.0),
        ]))
        .unwrap();
        KrausSet::discrete(vec![a1, a2]).unwrap()
    }

    #[test]
    fn tensor_invariants() {
        let k = total_kernel(&amp_damp(0.3), "ad");
        assert!(k.hermiticity_residual().unwrap() < 1e-15);
        assert!(k.completeness_residual.unwrap() < 1e-15);
        assert_eq!(k.kind, SymbolKind::Regular);
        let parts: Vec<_> = amp_damp(0.3).iter().map(|(a, l, w)| partial_kernel(a, w, l.clone())).collect();
        let sum: Vec<C64> = parts[0].coefficients().iter().zip(parts[1].coefficients()).map(|(a, b)| a + b).collect();
        assert_eq!(sum.as_slice(), k.tensor().unwrap());
    }

    #[test]
    fn identity_is_flagged_generalized() {
        let k = total_kernel(&KrausSet::identity(2), "id");
        assert_eq!(k.kind, SymbolKind::Generalized);
        assert_eq!(k.identity_weight, 1.0);
        assert!(k.evaluate([0.0, 1.0, 0.0], [0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn amplitude_damping_matches_oracle() {
        let grid = RayGrid::default();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(0.0, s)]).unwrap();
        let kraus = amp_damp(0.3);
        let t = tomogram_from_density(&rho, &grid).unwrap();
        let out = apply_kernel(&t, &total_kernel(&kraus, "ad"), &ReconstructionParams::default()).unwrap();
        let oracle = apply_channel_oracle(&rho, &kraus).unwrap().density().unwrap();
        let expect = tomogram_from_density(&oracle, &grid).unwrap();
        assert!(out.max_abs_diff(&expect) < 1e-5, "{}", out.max_abs_diff(&expect));
        assert!(out.normalization_drift() < 1e-5);
    }

    #[test]
    fn decay_kernel_closed_form() {
        // A = sqrt(γ)|0><1| gives (γ/2π) T_0(x) ∫ T_1(X̄ + X') e^{-iX'} dX'
        let gamma: f64 = 0.4;
        let a = Operator::new(CMatrix::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0), C64::new(gamma.sqrt(), 0.0),
            C64::new(0.0, 0.0), C64::new(0.0, 0.0),
        ]))
        .unwrap();
        let pk = partial_kernel(&a, 1.0, OutcomeLabel::Index(1));
        let rule = crate::quadrature::trapezoid(8001, -40.0, 40.0);
        for &(xbar, x) in &[([0.3, 0.7, -0.4], [0.2, 0.6, 0.8]), ([-1.0, 0.2, 1.1], [1.5, -1.0, 0.3])] {
            let t0 = dequantizer_element_general(0, 0, x[0], x[1], x[2]).unwrap().re;
            let mut moment = C64::new(0.0, 0.0);
            for (&xp, &w) in rule.nodes.iter().zip(&rule.weights) {
                let t1 = dequantizer_element_general(1, 1, xbar[0] + xp, xbar[1], xbar[2]).unwrap().re;
                moment += C64::from_polar(w * t1, -xp);
            }
            let closed = moment * (gamma / (2.0 * std::f64::consts::PI) * t0);
            assert!((pk.evaluate(xbar, x).unwrap() - closed).norm() < 1e-6);
        }
    }
}
