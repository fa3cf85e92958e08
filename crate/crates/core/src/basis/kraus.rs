// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{max_abs, DensityMatrix, Operator};
use crate::{tolerances, CMatrix, Result, TomoError, C64};

/// Outcome identifier of one Kraus operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OutcomeLabel {
    Index(usize),
    /// Environment bra/ket pair `(m, n)` of a joint-unitary construction.
    Pair(usize, usize),
    /// Continuous outcome value (pointer reading `Q`, projector centre `a`).
    Value(f64),
}

/// Operators `A_a` with outcome labels and quadrature weights `w_a`; the
/// channel is `rho -> sum_a w_a A_a rho A_a†`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<Operator>,
    labels: Vec<OutcomeLabel>,
    weights: Vec<f64>,
    tol_complete: f64,
}

impl KrausSet {
    /// Builds a set without requiring completeness; see [`KrausSet::is_complete`].
    pub fn new(
        operators: Vec<Operator>,
        labels: Vec<OutcomeLabel>,
        weights: Vec<f64>,
        tol_complete: f64,
    ) -> Result<Self> {
        let first = operators.first().ok_or_else(|| TomoError::validation("empty Kraus set"))?;
        let dim = first.dim();
        if operators.iter().any(|a| a.dim() != dim) {
            return Err(TomoError::validation("Kraus operators differ in dimension"));
        }
        if labels.len() != operators.len() || weights.len() != operators.len() {
            return Err(TomoError::validation("labels/weights length differs from operator count"));
        }
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(TomoError::validation("Kraus weights must be finite and >= 0"));
        }
        Ok(KrausSet { operators, labels, weights, tol_complete })
    }

    /// Discrete set with unit weights and index labels.
    pub fn discrete(operators: Vec<Operator>) -> Result<Self> {
        let n = operators.len();
        Self::new(
            operators,
            (0..n).map(OutcomeLabel::Index).collect(),
            vec![1.0; n],
            tolerances::COMPLETE_ANALYTIC,
        )
    }

    /// As [`KrausSet::new`] but rejects sets failing completeness.
    pub fn new_complete(
        operators: Vec<Operator>,
        labels: Vec<OutcomeLabel>,
        weights: Vec<f64>,
        tol_complete: f64,
    ) -> Result<Self> {
        let set = Self::new(operators, labels, weights, tol_complete)?;
        let r = set.completeness_residual();
        if r > tol_complete {
            return Err(TomoError::validation(format!(
                "Kraus set incomplete: residual {r:.3e} > {tol_complete:.1e}"
            )));
        }
        Ok(set)
    }

    pub fn identity(dim: usize) -> Self {
        Self::discrete(vec![Operator::identity(dim)]).expect("identity set is valid")
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn labels(&self) -> &[OutcomeLabel] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tol_complete(&self) -> f64 {
        self.tol_complete
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Operator, &OutcomeLabel, f64)> {
        self.operators
            .iter()
            .zip(&self.labels)
            .zip(&self.weights)
            .map(|((a, l), &w)| (a, l, w))
    }

    /// Effect operator `sum_a w_a A_a† A_a`.
    pub fn effect(&self) -> CMatrix {
        let dim = self.dim();
        let mut e = CMatrix::zeros(dim, dim);
        for (a, _, w) in self.iter() {
            e += a.matrix().adjoint() * a.matrix() * C64::new(w, 0.0);
        }
        e
    }

    /// `max |sum_a w_a A_a† A_a - 1|`.
    pub fn completeness_residual(&self) -> f64 {
        let dim = self.dim();
        max_abs(&(self.effect() - CMatrix::identity(dim, dim)))
    }

    pub fn is_complete(&self) -> bool {
        self.completeness_residual() <= self.tol_complete
    }

    /// Copy with element `index` removed.
    pub fn without(&self, index: usize) -> Result<Self> {
        if index >= self.len() || self.len() == 1 {
            return Err(TomoError::validation(format!("cannot drop Kraus element {index}")));
        }
        let mut s = self.clone();
        s.operators.remove(index);
        s.labels.remove(index);
        s.weights.remove(index);
        Ok(s)
    }

    /// Copy with element `index` multiplied by `factor`.
    pub fn with_scaled(&self, index: usize, factor: f64) -> Result<Self> {
        if index >= self.len() {
            return Err(TomoError::validation(format!("no Kraus element {index}")));
        }
        let mut s = self.clone();
        s.operators[index] = Operator(s.operators[index].matrix() * C64::new(factor, 0.0));
        Ok(s)
    }

    /// Copy without the elements whose label satisfies `drop`; for
    /// continuous families this removes an outcome window.
    pub fn without_outcomes(&self, drop: impl Fn(&OutcomeLabel) -> bool) -> Result<Self> {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| !drop(&self.labels[i])).collect();
        if keep.is_empty() || keep.len() == self.len() {
            return Err(TomoError::validation("outcome selection must drop some but not all elements"));
        }
        let mut s = self.clone();
        s.operators = keep.iter().map(|&i| self.operators[i].clone()).collect();
        s.labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        s.weights = keep.iter().map(|&i| self.weights[i]).collect();
        Ok(s)
    }

    /// Copy with every element whose label satisfies `select` multiplied by `factor`.
    pub fn with_outcomes_scaled(&self, select: impl Fn(&OutcomeLabel) -> bool, factor: f64) -> Result<Self> {
        let mut s = self.clone();
        let mut hit = false;
        for (op, label) in s.operators.iter_mut().zip(&self.labels) {
            if select(label) {
                *op = Operator(op.matrix() * C64::new(factor, 0.0));
                hit = true;
            }
        }
        if !hit {
            return Err(TomoError::validation("no element matches the outcome selection"));
        }
        Ok(s)
    }
}

/// Output of the density-matrix oracle.
#[derive(Debug, Clone)]
pub struct OracleOutput {
    pub rho: Operator,
    /// `|Tr rho' - 1|`.
    pub trace_drift: f64,
    /// Set when the drift exceeds ten times the set's completeness tolerance.
    /// The output is never renormalised.
    pub trace_flagged: bool,
}

impl OracleOutput {
    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.rho.clone())
    }
}

/// `rho' = sum_a w_a A_a rho A_a†`.
pub fn apply_channel_oracle(rho: &DensityMatrix, kraus: &KrausSet) -> Result<OracleOutput> {
    apply_kraus_to_matrix(rho.matrix(), kraus)
}

/// Oracle on an arbitrary operator (unnormalised states, selective branches).
pub fn apply_kraus_to_matrix(rho: &CMatrix, kraus: &KrausSet) -> Result<OracleOutput> {
    if rho.nrows() != kraus.dim() {
        return Err(TomoError::validation(format!(
            "state dimension {} vs Kraus dimension {}",
            rho.nrows(),
            kraus.dim()
        )));
    }
    let dim = kraus.dim();
    let mut out = CMatrix::zeros(dim, dim);
    for (a, _, w) in kraus.iter() {
        out += a.matrix() * rho * a.matrix().adjoint() * C64::new(w, 0.0);
    }
    let out = super::hermitize(&out);
    let drift = (out.trace().re - rho.trace().re).abs();
    Ok(OracleOutput {
        rho: Operator(out),
        trace_drift: drift,
        trace_flagged: drift > 10.0 * kraus.tol_complete,
    })
}

/// Kraus set of a joint system-environment unitary with a diagonal
/// environment state: `A_mn = sqrt(p_n) <m|U|n>_E`.
///
/// `unitary` acts on `system ⊗ environment` with the environment index
/// fastest; `env_probs` has length `env_dim`.
pub fn joint_unitary_kraus(unitary: &Operator, env_probs: &[f64], env_dim: usize) -> Result<KrausSet> {
    let total = unitary.dim();
    if env_dim == 0 || !total.is_multiple_of(env_dim) {
        return Err(TomoError::validation(format!(
            "unitary dimension {total} is not a multiple of environment dimension {env_dim}"
        )));
    }
    if env_probs.len() != env_dim {
        return Err(TomoError::validation("environment probabilities length mismatch"));
    }
    let psum: f64 = env_probs.iter().sum();
    if env_probs.iter().any(|p| *p < 0.0) || (psum - 1.0).abs() > 1e-10 {
        return Err(TomoError::validation(format!("environment probabilities sum to {psum}")));
    }
    let u = unitary.matrix();
    let unit_res = max_abs(&(u.adjoint() * u - CMatrix::identity(total, total)));
    if unit_res > tolerances::UNITARY {
        return Err(TomoError::validation(format!("joint evolution not unitary ({unit_res:.3e})")));
    }
    let sys = total / env_dim;
    let mut ops = Vec::new();
    let mut labels = Vec::new();
    for (n, &p) in env_probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let sp = p.sqrt();
        for m in 0..env_dim {
            let a = CMatrix::from_fn(sys, sys, |i, j| u[(i * env_dim + m, j * env_dim + n)] * sp);
            ops.push(Operator(a));
            labels.push(OutcomeLabel::Pair(m, n));
        }
    }
    let count = ops.len();
    KrausSet::new_complete(ops, labels, vec![1.0; count], tolerances::COMPLETE_ANALYTIC)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> Operator {
        let n = v.len();
        Operator::new(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(v[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
        .unwrap()
    }

    #[test]
    fn identity_set_is_identity_channel() {
        let rho = DensityMatrix::from_diagonal(&[0.25, 0.75]).unwrap();
        let out = apply_channel_oracle(&rho, &KrausSet::identity(2)).unwrap();
        assert!(out.rho.max_abs_diff(rho.operator()) < 1e-15);
        assert!(!out.trace_flagged);
    }

    #[test]
    fn phase_flip_half_kills_coherence() {
        let p: f64 = 0.5;
        let set = KrausSet::discrete(vec![
            diag(&[p.sqrt(), p.sqrt()]),
            diag(&[(1.0 - p).sqrt(), -(1.0 - p).sqrt()]),
        ])
        .unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let out = apply_channel_oracle(&rho, &set).unwrap();
        assert!(out.rho.matrix()[(0, 1)].norm() < 1e-15);
        assert!((out.rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn incomplete_set_flags_trace() {
        let set = KrausSet::discrete(vec![diag(&[1.0, 0.5])]).unwrap();
        assert!(!set.is_complete());
        let rho = DensityMatrix::from_diagonal(&[0.0, 1.0]).unwrap();
        let out = apply_channel_oracle(&rho, &set).unwrap();
        assert!(out.trace_flagged);
        assert!((out.rho.trace().re - 0.25).abs() < 1e-15);
        assert!(KrausSet::new_complete(
            vec![diag(&[1.0, 0.5])],
            vec![OutcomeLabel::Index(0)],
            vec![1.0],
            1e-8
        )
        .is_err());
    }

    #[test]
    fn trivial_joint_unitary_gives_identity() {
        let u = Operator::identity(4);
        let set = joint_unitary_kraus(&u, &[1.0, 0.0], 2).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.operators()[0].max_abs_diff(&Operator::identity(2)) < 1e-15);
        assert!(set.operators()[1].max_abs_diff(&Operator::zeros(2)) < 1e-15);
        assert!(set.is_complete());
    }

    #[test]
    fn non_unitary_joint_evolution_rejected() {
        let mut m = CMatrix::identity(4, 4);
        m[(0, 0)] = C64::new(1.1, 0.0);
        let u = Operator::new(m).unwrap();
        assert!(matches!(joint_unitary_kraus(&u, &[1.0, 0.0], 2), Err(TomoError::Validation(_))));
    }
}
