// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use rayon::prelude::*;

use super::grid::{to_unit_ray, RayGrid};
use crate::basis::{displacement_element, hermite_functions, DensityMatrix, Operator};
use crate::{tolerances, CMatrix, Result, TomoError, C64};

/// `<n| U(X, theta) |m> = psi_n(X) psi_m(X) e^{i (n - m) theta}` on the unit
/// circle `mu = cos(theta)`, `nu = sin(theta)`.
///
/// The phase sign is the one reproduced by `∫ D_nm(k x) dk`; see the
/// `dequantizer_matches_quantizer_k_integral` test.
pub fn dequantizer_element(n: usize, m: usize, x: f64, theta: f64) -> C64 {
    let psi = hermite_functions(n.max(m) + 1, x);
    C64::from_polar(psi[n] * psi[m], (n as f64 - m as f64) * theta)
}

/// Dequantizer element at an arbitrary point, through homogeneity
/// `U(lambda x) = U(x) / |lambda|`. The origin `(mu, nu) = 0` holds a delta
/// in `X` and is refused.
pub fn dequantizer_element_general(n: usize, m: usize, x: f64, mu: f64, nu: f64) -> Result<C64> {
    let (scale, xu, theta) = to_unit_ray(x, mu, nu).ok_or_else(|| {
        TomoError::Generalized("dequantizer at mu = nu = 0 is delta(X)".into())
    })?;
    Ok(dequantizer_element(n, m, xu, theta) / scale)
}

/// `<n| D(X, mu, nu) |m> = e^{iX} <n| exp(-i mu q - i nu p) |m> / 2pi`.
pub fn quantizer_element(n: usize, m: usize, x: f64, mu: f64, nu: f64) -> C64 {
    C64::from_polar(1.0 / (2.0 * PI), x) * displacement_element(n, m, mu, nu)
}

/// Ray samples `f(X_i, theta_j)` of a tomogram.
#[derive(Debug, Clone, PartialEq)]
pub struct TomogramGrid {
    grid: RayGrid,
    values: Vec<f64>,
    /// Source state and channel history, outermost last.
    pub provenance: Vec<String>,
}

/// Whether a symbol is an ordinary function or only meaningful under
/// integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolKind {
    Regular,
    Generalized,
}

/// Ray samples of an operator symbol `f_A(X, theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    grid: RayGrid,
    values: Vec<C64>,
    pub tag: String,
    pub kind: SymbolKind,
}

fn interpolate<T>(grid: &RayGrid, values: &[T], xu: f64, theta: f64) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T> + Default,
{
    let nt = grid.n_theta();
    let nx = grid.n_x();
    let at = |j: usize, x: f64| -> T {
        // rows j >= nt wrap to theta - pi with X reflected
        let (row, x) = if j >= nt { (j - nt, -x) } else { (j, x) };
        if let Some(i) = grid.snap_x(x) {
            return values[grid.index(row, i)];
        }
        let f = (x + grid.x_max()) / grid.dx();
        if !(0.0..=(nx - 1) as f64).contains(&f) {
            return T::default();
        }
        let i0 = (f.floor() as usize).min(nx - 2);
        let t = f - i0 as f64;
        values[grid.index(row, i0)] * (1.0 - t) + values[grid.index(row, i0 + 1)] * t
    };
    let ft = theta / grid.dtheta();
    let rt = ft.round();
    if (ft - rt).abs() < 1e-9 {
        return at(rt as usize % (2 * nt), xu);
    }
    let j0 = ft.floor() as usize;
    let t = ft - j0 as f64;
    at(j0 % (2 * nt), xu) * (1.0 - t) + at((j0 + 1) % (2 * nt), xu) * t
}

impl TomogramGrid {
    pub fn new(grid: RayGrid, values: Vec<f64>, provenance: Vec<String>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(TomoError::validation(format!(
                "{} tomogram values for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(TomoError::validation("non-finite tomogram value"));
        }
        Ok(TomogramGrid { grid, values, provenance })
    }

    pub fn grid(&self) -> &RayGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, j: usize, i: usize) -> f64 {
        self.values[self.grid.index(j, i)]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let n = self.grid.n_x();
        &self.values[j * n..(j + 1) * n]
    }

    /// `sum_X w_X T(X, theta_j)`.
    pub fn normalization(&self, j: usize) -> f64 {
        self.row(j).iter().enumerate().map(|(i, v)| self.grid.x_weight(i) * v).sum()
    }

    pub fn normalizations(&self) -> Vec<f64> {
        (0..self.grid.n_theta()).map(|j| self.normalization(j)).collect()
    }

    /// Largest `|sum_X w_X T - 1|` over rays.
    pub fn normalization_drift(&self) -> f64 {
        self.normalizations().iter().fold(0.0, |a, s| a.max((s - 1.0).abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &TomogramGrid) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0, |a, (x, y)| a.max((x - y).abs()))
    }

    /// Root-mean-square difference weighted by the quadrature.
    pub fn l2_diff(&self, other: &TomogramGrid) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.grid.n_theta() {
            for i in 0..self.grid.n_x() {
                let d = self.value(j, i) - other.value(j, i);
                acc += self.grid.x_weight(i) * self.grid.dtheta() * d * d;
            }
        }
        acc.sqrt()
    }

    /// Value on the unit circle; linear interpolation between nodes, exact on
    /// nodes.
    pub fn evaluate_unit(&self, x: f64, theta: f64) -> f64 {
        interpolate(&self.grid, &self.values, x, theta.rem_euclid(2.0 * PI))
    }

    /// `T(X, mu, nu)` through homogeneity `T(lambda x) = T(x) / |lambda|`.
    pub fn evaluate(&self, x: f64, mu: f64, nu: f64) -> Result<f64> {
        let (scale, xu, theta) = to_unit_ray(x, mu, nu)
            .ok_or_else(|| TomoError::Generalized("tomogram at mu = nu = 0 is delta(X)".into()))?;
        Ok(self.evaluate_unit(xu, theta) / scale)
    }

    pub fn scaled(&self, factor: f64) -> TomogramGrid {
        TomogramGrid {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn map_rows(&self, mut f: impl FnMut(usize, &[f64]) -> Vec<f64>) -> Result<TomogramGrid> {
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..self.grid.n_theta() {
            let row = f(j, self.row(j));
            if row.len() != self.grid.n_x() {
                return Err(TomoError::validation("row map changed the row length"));
            }
            values.extend(row);
        }
        TomogramGrid::new(self.grid.clone(), values, self.provenance.clone())
    }

    pub fn with_provenance(mut self, step: impl Into<String>) -> Self {
        self.provenance.push(step.into());
        self
    }

    pub fn as_symbol(&self) -> SymbolGrid {
        SymbolGrid {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| C64::new(v, 0.0)).collect(),
            tag: self.provenance.join(" | "),
            kind: SymbolKind::Regular,
        }
    }
}

impl SymbolGrid {
    pub fn new(grid: RayGrid, values: Vec<C64>, tag: impl Into<String>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(TomoError::validation("symbol length does not match grid"));
        }
        Ok(SymbolGrid { grid, values, tag: tag.into(), kind: SymbolKind::Regular })
    }

    pub fn generalized(mut self) -> Self {
        self.kind = SymbolKind::Generalized;
        self
    }

    pub fn grid(&self) -> &RayGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn value(&self, j: usize, i: usize) -> C64 {
        self.values[self.grid.index(j, i)]
    }

    /// Symbol of the adjoint operator.
    pub fn conj(&self) -> SymbolGrid {
        SymbolGrid {
            grid: self.grid.clone(),
            values: self.values.iter().map(|z| z.conj()).collect(),
            tag: format!("({})†", self.tag),
            kind: self.kind,
        }
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |a, z| a.max(z.im.abs()))
    }

    pub fn max_abs_diff(&self, other: &SymbolGrid) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0, |a, (x, y)| a.max((x - y).norm()))
    }

    pub fn linear_combination(&self, a: C64, other: &SymbolGrid, b: C64) -> SymbolGrid {
        SymbolGrid {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
            tag: format!("{a}·{} + {b}·{}", self.tag, other.tag),
            kind: if self.kind == SymbolKind::Regular && other.kind == SymbolKind::Regular {
                SymbolKind::Regular
            } else {
                SymbolKind::Generalized
            },
        }
    }

    pub fn evaluate(&self, x: f64, mu: f64, nu: f64) -> Result<C64> {
        if self.kind == SymbolKind::Generalized {
            return Err(TomoError::Generalized(format!(
                "symbol '{}' is a distribution; use its regularised form",
                self.tag
            )));
        }
        let (scale, xu, theta) = to_unit_ray(x, mu, nu)
            .ok_or_else(|| TomoError::Generalized("symbol at mu = nu = 0".into()))?;
        Ok(interpolate(&self.grid, &self.values, xu, theta) / scale)
    }
}

/// `Tr{A U(X, theta)}` on every grid node: `v† A v` with
/// `v_n = e^{i n theta} psi_n(X)`.
pub(crate) fn symbol_values(a: &CMatrix, grid: &RayGrid) -> Vec<C64> {
    let dim = a.nrows();
    let psi: Vec<Vec<f64>> = grid.x_nodes().iter().map(|&x| hermite_functions(dim, x)).collect();
    grid.theta_nodes()
        .par_iter()
        .flat_map_iter(|&theta| {
            let phases: Vec<C64> = (0..dim).map(|n| C64::from_polar(1.0, n as f64 * theta)).collect();
            let psi = &psi;
            (0..grid.n_x()).map(move |i| {
                let v: Vec<C64> = (0..dim).map(|n| phases[n] * psi[i][n]).collect();
                let mut acc = C64::new(0.0, 0.0);
                for n in 0..dim {
                    let mut row = C64::new(0.0, 0.0);
                    for m in 0..dim {
                        row += a[(n, m)] * v[m];
                    }
                    acc += v[n].conj() * row;
                }
                acc
            })
        })
        .collect()
}

pub fn symbol_from_operator(a: &Operator, grid: &RayGrid) -> SymbolGrid {
    SymbolGrid {
        grid: grid.clone(),
        values: symbol_values(a.matrix(), grid),
        tag: format!("operator dim {}", a.dim()),
        kind: SymbolKind::Regular,
    }
}

fn real_values(values: Vec<C64>) -> Result<Vec<f64>> {
    let worst = values.iter().fold(0.0f64, |a, z| a.max(z.im.abs()));
    if worst > tolerances::REALITY {
        return Err(TomoError::validation(format!(
            "tomogram has imaginary residue {worst:.3e} > {:.0e}",
            tolerances::REALITY
        )));
    }
    Ok(values.into_iter().map(|z| z.re).collect())
}

/// Tomogram `Tr{rho U(x)}` of a valid state on the ray grid.
pub fn tomogram_from_density(rho: &DensityMatrix, grid: &RayGrid) -> Result<TomogramGrid> {
    let needed = 6.0 * (rho.mean_photon_number() + 1.0).sqrt();
    if grid.x_max() < needed {
        log::debug!("x_max {} below 6·sqrt(<n>+1) = {needed:.2}", grid.x_max());
    }
    let values = real_values(symbol_values(rho.matrix(), grid))?;
    let t = TomogramGrid::new(grid.clone(), values, vec![format!("state dim {}", rho.dim())])?;
    let drift = t.normalization_drift();
    if drift > tolerances::GRID_NORMALIZATION {
        return Err(TomoError::convergence(format!(
            "tomogram normalisation drifts by {drift:.3e}; enlarge x_max or n_x"
        )));
    }
    Ok(t)
}

/// Tomogram of a Hermitian operator that need not have unit trace (tomogram
/// densities of selective outcomes, raw oracle outputs).
pub fn tomogram_from_hermitian(a: &Operator, grid: &RayGrid) -> Result<TomogramGrid> {
    let values = real_values(symbol_values(a.matrix(), grid))?;
    TomogramGrid::new(grid.clone(), values, vec![format!("hermitian dim {}", a.dim())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{make_state, HilbertSpec, StateKind};
    use crate::quadrature::trapezoid;

    fn fock(dim: usize, n: usize) -> DensityMatrix {
        make_state(&HilbertSpec::new(dim).unwrap(), &StateKind::Fock { n }).unwrap().density
    }

    #[test]
    fn dequantizer_matches_quantizer_k_integral() {
        // U(x) = ∫ D(k x) dk, evaluated by quadrature for (n, m) = (0, 1)
        let rule = trapezoid(6001, -30.0, 30.0);
        for &(x, theta) in &[(0.4f64, 0.3f64), (-0.9, 1.2), (1.3, 2.7)] {
            for &(n, m) in &[(0, 1), (1, 0), (1, 2), (0, 0)] {
                let mut acc = C64::new(0.0, 0.0);
                for (&k, &w) in rule.nodes.iter().zip(&rule.weights) {
                    acc += quantizer_element(n, m, k * x, k * theta.cos(), k * theta.sin()) * w;
                }
                let closed = dequantizer_element(n, m, x, theta);
                assert!((acc - closed).norm() < 1e-10, "({n},{m}) {acc} vs {closed}");
            }
        }
    }

    #[test]
    fn dequantizer_diagonal_is_theta_free() {
        let a = dequantizer_element(3, 3, 0.7, 0.1);
        let b = dequantizer_element(3, 3, 0.7, 2.9);
        assert!((a - b).norm() < 1e-15);
        let g = dequantizer_element(0, 0, 1.1, 0.4);
        assert!((g.re - (-(1.1f64 * 1.1)).exp() / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dequantizer_from_four_state_tomograms() {
        // |m><n| = rho_d + i rho_r - (1+i)/2 (rho_m + rho_n); U_01 = Tr{|1><0| U}
        let grid = RayGrid::new(6.0, 61, 8).unwrap();
        let (m, n) = (1usize, 0usize);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut vd = vec![C64::new(0.0, 0.0); 2];
        vd[m] = C64::new(s, 0.0);
        vd[n] = C64::new(s, 0.0);
        let mut vr = vec![C64::new(0.0, 0.0); 2];
        vr[m] = C64::new(s, 0.0);
        vr[n] = C64::new(0.0, s);
        let td = tomogram_from_density(&DensityMatrix::pure(&vd).unwrap(), &grid).unwrap();
        let tr = tomogram_from_density(&DensityMatrix::pure(&vr).unwrap(), &grid).unwrap();
        let tm = tomogram_from_density(&fock(2, m), &grid).unwrap();
        let tn = tomogram_from_density(&fock(2, n), &grid).unwrap();
        for j in 0..grid.n_theta() {
            for i in 0..grid.n_x() {
                let combo = C64::new(td.value(j, i), tr.value(j, i))
                    - C64::new(0.5, 0.5) * (tm.value(j, i) + tn.value(j, i));
                let direct = dequantizer_element(n, m, grid.x_nodes()[i], grid.theta_nodes()[j]);
                assert!((combo - direct).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn quantizer_origin_and_diagonal_identity() {
        assert!((quantizer_element(0, 0, 0.0, 0.0, 0.0) - C64::new(1.0 / (2.0 * PI), 0.0)).norm() < 1e-15);
        // D_mm(x) = (1/2pi) ∫ T_m(X + X', mu, nu) e^{-iX'} dX'
        let rule = trapezoid(8001, -40.0, 40.0);
        for &(x, mu, nu) in &[(0.3, 0.8, 0.5), (-1.0, -0.4, 1.3)] {
            for m in 0..4 {
                let mut acc = C64::new(0.0, 0.0);
                for (&xp, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let t = dequantizer_element_general(m, m, x + xp, mu, nu).unwrap().re;
                    acc += C64::from_polar(w * t, -xp);
                }
                acc /= 2.0 * PI;
                assert!((acc - quantizer_element(m, m, x, mu, nu)).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn fock_tomograms_closed_form() {
        let grid = RayGrid::default();
        let t0 = tomogram_from_density(&fock(16, 0), &grid).unwrap();
        let t1 = tomogram_from_density(&fock(16, 1), &grid).unwrap();
        for j in [0, 17, 63] {
            for (i, &x) in grid.x_nodes().iter().enumerate() {
                let g = (-x * x).exp();
                assert!((t0.value(j, i) - g / PI.sqrt()).abs() < 1e-12);
                assert!((t1.value(j, i) - 2.0 / PI.sqrt() * x * x * g).abs() < 1e-12);
            }
        }
        assert!(t0.normalization_drift() < 1e-12);
        assert!(t1.normalization_drift() < 1e-12);
    }

    #[test]
    fn homogeneity_is_exact_on_nodes() {
        let grid = RayGrid::default();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(0.0, s)]).unwrap();
        let t = tomogram_from_density(&rho, &grid).unwrap();
        for &lambda in &[0.5, 3.0, -2.0] {
            for &(j, i) in &[(5usize, 100usize), (40, 130), (0, 128)] {
                let theta = grid.theta_nodes()[j];
                let x = grid.x_nodes()[i];
                let v = t.evaluate(lambda * x, lambda * theta.cos(), lambda * theta.sin()).unwrap();
                let stored = t.value(j, i);
                assert!((v * lambda.abs() - stored).abs() <= 1e-14 * stored.abs().max(1e-300));
            }
        }
        assert!(matches!(t.evaluate(0.1, 0.0, 0.0), Err(TomoError::Generalized(_))));
    }

    #[test]
    fn adjoint_symbol_is_conjugate_and_hermitian_symbols_real() {
        let grid = RayGrid::new(8.0, 65, 8).unwrap();
        let a = Operator::new(CMatrix::from_fn(3, 3, |i, j| C64::new(i as f64 + 0.3, j as f64 - 0.7 * i as f64)))
            .unwrap();
        let fa = symbol_from_operator(&a, &grid);
        let fad = symbol_from_operator(&a.adjoint(), &grid);
        assert!(fa.conj().max_abs_diff(&fad) < 1e-14);
        let h = Operator::new(a.matrix() + a.matrix().adjoint()).unwrap();
        assert!(symbol_from_operator(&h, &grid).max_imag() < 1e-12);
    }
}
