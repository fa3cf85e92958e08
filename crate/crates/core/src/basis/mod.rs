// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated harmonic-oscillator Hilbert space: operators, states, Kraus sets
//! and the density-matrix channel oracle.

mod functions;
mod kraus;
mod states;

pub use functions::{
    displacement_element, displacement_matrix, displacement_real, hermite_function,
    hermite_functions, try_hermite_function, weyl_amplitude,
};
pub use kraus::{
    apply_channel_oracle, joint_unitary_kraus, KrausSet, OracleOutput, OutcomeLabel,
};
pub use states::{make_state, PreparedState, StateKind};

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::{tolerances, CMatrix, Result, TomoError, C64};

/// Dimension of the truncated oscillator basis `|0> .. |dim-1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertSpec {
    dim: usize,
}

impl HilbertSpec {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(TomoError::validation(format!("basis dimension {dim} < 2")));
        }
        Ok(HilbertSpec { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Complex `dim x dim` operator in the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(CMatrix);

impl Operator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(TomoError::validation(format!(
                "operator is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(TomoError::validation("operator has non-finite entries"));
        }
        Ok(Operator(m))
    }

    pub fn identity(dim: usize) -> Self {
        Operator(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Operator(CMatrix::zeros(dim, dim))
    }

    /// `|n><m|`.
    pub fn matrix_unit(dim: usize, n: usize, m: usize) -> Self {
        let mut a = CMatrix::zeros(dim, dim);
        a[(n, m)] = C64::new(1.0, 0.0);
        Operator(a)
    }

    /// Annihilation operator truncated to `dim` levels.
    pub fn annihilation(dim: usize) -> Self {
        Operator(CMatrix::from_fn(dim, dim, |i, j| {
            if j == i + 1 {
                C64::new((j as f64).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// Position `q = (a + a†)/√2`.
    pub fn position(dim: usize) -> Self {
        let a = Self::annihilation(dim).0;
        Operator((&a + a.adjoint()) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
    }

    /// Momentum `p = (a - a†)/(i√2)`.
    pub fn momentum(dim: usize) -> Self {
        let a = Self::annihilation(dim).0;
        Operator((&a - a.adjoint()) * C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Operator(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        max_abs(&(&self.0 - self.0.adjoint()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Hilbert-Schmidt product `Tr{A† B}`.
    pub fn hs_inner(&self, other: &Operator) -> C64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        max_abs(&(&self.0 - &other.0))
    }
}

/// Largest entry modulus of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Unit-trace positive semidefinite Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity at the default
    /// tolerances.
    pub fn new(op: Operator) -> Result<Self> {
        let herm = op.hermiticity_residual();
        if herm > tolerances::HERMITIAN {
            return Err(TomoError::validation(format!("density matrix not Hermitian ({herm:.3e})")));
        }
        let tr = op.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tolerances::TRACE {
            return Err(TomoError::validation(format!("density matrix trace {tr}")));
        }
        let lo = min_eigenvalue(op.matrix());
        if lo < tolerances::PSD_FLOOR {
            return Err(TomoError::validation(format!("density matrix eigenvalue {lo:.3e} < 0")));
        }
        Ok(DensityMatrix(op))
    }

    /// `|psi><psi|` for a normalised vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(TomoError::validation("zero state vector"));
        }
        let v = nalgebra::DVector::from_iterator(psi.len(), psi.iter().map(|z| z / norm));
        let m = &v * v.adjoint();
        Self::new(Operator::new(hermitize(&m))?)
    }

    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        let n = p.len();
        Self::new(Operator::new(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(p[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))?)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn operator(&self) -> &Operator {
        &self.0
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.matrix()
    }

    pub fn purity(&self) -> f64 {
        self.0.hs_inner(&self.0).re
    }

    pub fn mean_photon_number(&self) -> f64 {
        (0..self.dim()).map(|n| n as f64 * self.matrix()[(n, n)].re).sum()
    }

    /// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))²`.
    pub fn fidelity(&self, other: &DensityMatrix) -> f64 {
        let s = psd_sqrt(self.matrix());
        let inner = hermitize(&(&s * other.matrix() * &s));
        let eig = SymmetricEigen::new(inner);
        let t: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();
        t * t
    }
}

/// `(m + m†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub(crate) fn min_eigenvalue(m: &CMatrix) -> f64 {
    let eig = SymmetricEigen::new(hermitize(m));
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Principal square root of a Hermitian PSD matrix, clipping round-off
/// negatives to zero.
fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let eig = SymmetricEigen::new(hermitize(m));
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, &l) in eig.eigenvalues.iter().enumerate() {
        let s = l.max(0.0).sqrt();
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= s;
        }
    }
    &scaled * v.adjoint()
}

/// Eigen-decomposition projection onto the PSD cone; returns the projected
/// matrix and the clipped negative weight.
pub(crate) fn project_psd(m: &CMatrix) -> (CMatrix, f64) {
    let eig = SymmetricEigen::new(hermitize(m));
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    let mut clipped = 0.0;
    for (j, &l) in eig.eigenvalues.iter().enumerate() {
        if l < 0.0 {
            clipped += -l;
        }
        let keep = l.max(0.0);
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= keep;
        }
    }
    (hermitize(&(&scaled * v.adjoint())), clipped)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_rejects_trivial_dimension() {
        assert!(HilbertSpec::new(1).is_err());
        assert_eq!(HilbertSpec::new(2).unwrap().dim(), 2);
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::from_diagonal(&[0.5, 0.5]).is_ok());
        assert!(DensityMatrix::from_diagonal(&[0.6, 0.5]).is_err());
        assert!(DensityMatrix::from_diagonal(&[1.5, -0.5]).is_err());
        let mut m = CMatrix::identity(2, 2) * C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.1);
        assert!(DensityMatrix::new(Operator::new(m).unwrap()).is_err());
    }

    #[test]
    fn fidelity_of_orthogonal_and_equal_states() {
        let a = DensityMatrix::from_diagonal(&[1.0, 0.0, 0.0]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.0, 1.0, 0.0]).unwrap();
        let c = DensityMatrix::from_diagonal(&[0.5, 0.5, 0.0]).unwrap();
        assert!(a.fidelity(&b).abs() < 1e-14);
        assert!((a.fidelity(&a) - 1.0).abs() < 1e-12);
        assert!((a.fidelity(&c) - 0.5).abs() < 1e-12);
        assert!((c.purity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn canonical_commutator_away_from_edge() {
        let n = 8;
        let q = Operator::position(n).into_matrix();
        let p = Operator::momentum(n).into_matrix();
        let c = &q * &p - &p * &q;
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let target = if i == j { C64::new(0.0, 1.0) } else { C64::new(0.0, 0.0) };
                assert!((c[(i, j)] - target).norm() < 1e-14);
            }
        }
    }
}
