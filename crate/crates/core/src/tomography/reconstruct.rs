// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::RayGrid;
use super::transform::{SymbolGrid, SymbolKind, TomogramGrid};
use crate::basis::{displacement_real, hermitize, project_psd, DensityMatrix, HilbertSpec, Operator};
use crate::quadrature::{cosine_taper, gauss_legendre};
use crate::{tolerances, CMatrix, Result, TomoError, C64};

/// Radial part of the inverse transform: `|k| <= k_max`, Gauss-Legendre
/// nodes, cosine taper over the last `taper_fraction` of the range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionParams {
    pub k_max: f64,
    pub taper_fraction: f64,
    pub radial_nodes: usize,
}

impl Default for ReconstructionParams {
    fn default() -> Self {
        ReconstructionParams { k_max: 16.0, taper_fraction: 0.15, radial_nodes: 128 }
    }
}

impl ReconstructionParams {
    pub fn with_k_max(k_max: f64) -> Self {
        ReconstructionParams { k_max, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max <= 0.0 || !self.k_max.is_finite() {
            return Err(TomoError::validation(format!("k_max {} must be positive", self.k_max)));
        }
        if !(0.0..1.0).contains(&self.taper_fraction) {
            return Err(TomoError::validation("taper fraction must lie in [0, 1)"));
        }
        if self.radial_nodes < 8 {
            return Err(TomoError::validation("at least 8 radial nodes are required"));
        }
        Ok(())
    }
}

/// `e^{ikX}` tables for the radial rule on a given ray grid, with the X
/// trapezoid weights folded in. Independent of the basis dimension.
#[derive(Debug)]
pub struct RadialTables {
    pub k: Vec<f64>,
    /// `w_k k window(k)`.
    pub weight: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
    n_x: usize,
}

impl RadialTables {
    fn build(grid: &RayGrid, params: &ReconstructionParams) -> Self {
        let rule = gauss_legendre(params.radial_nodes, 0.0, params.k_max);
        let wx = grid.x_weights();
        let n_x = grid.n_x();
        let mut cos = Vec::with_capacity(rule.len() * n_x);
        let mut sin = Vec::with_capacity(rule.len() * n_x);
        for &k in &rule.nodes {
            for (i, &x) in grid.x_nodes().iter().enumerate() {
                let (s, c) = (k * x).sin_cos();
                cos.push(wx[i] * c);
                sin.push(wx[i] * s);
            }
        }
        let weight = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&k, &w)| w * k * cosine_taper(k, params.k_max, params.taper_fraction))
            .collect();
        RadialTables { k: rule.nodes, weight, cos, sin, n_x }
    }

    /// `(F+, F-)` with `F± = sum_X w_X f(X) e^{±ikX}` at radial node `r`.
    fn fourier(&self, r: usize, row: &[C64]) -> (C64, C64) {
        let c = &self.cos[r * self.n_x..(r + 1) * self.n_x];
        let s = &self.sin[r * self.n_x..(r + 1) * self.n_x];
        let mut cc = C64::new(0.0, 0.0);
        let mut ss = C64::new(0.0, 0.0);
        for i in 0..self.n_x {
            cc += row[i] * c[i];
            ss += row[i] * s[i];
        }
        let is = C64::new(-ss.im, ss.re);
        (cc + is, cc - is)
    }

    /// `F±` for every `(theta_j, k_r)`, row-major in `j`.
    fn transform(&self, grid: &RayGrid, values: &[C64]) -> Vec<(C64, C64)> {
        let n_x = grid.n_x();
        (0..grid.n_theta())
            .into_par_iter()
            .flat_map_iter(|j| {
                let row = &values[j * n_x..(j + 1) * n_x];
                (0..self.k.len()).map(move |r| self.fourier(r, row))
            })
            .collect()
    }
}

/// Real displacement tables `d_jm(k/sqrt 2)` at the radial nodes, together
/// with the dimension-free [`RadialTables`].
#[derive(Debug)]
pub struct QuantizerCache {
    pub dim: usize,
    pub radial: Arc<RadialTables>,
    d: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct TableKey {
    x_max: u64,
    n_x: usize,
    n_theta: usize,
    k_max: u64,
    taper: u64,
    nodes: usize,
}

impl TableKey {
    fn new(grid: &RayGrid, p: &ReconstructionParams) -> Self {
        TableKey {
            x_max: grid.x_max().to_bits(),
            n_x: grid.n_x(),
            n_theta: grid.n_theta(),
            k_max: p.k_max.to_bits(),
            taper: p.taper_fraction.to_bits(),
            nodes: p.radial_nodes,
        }
    }
}

type Registry<K, V> = OnceLock<Mutex<HashMap<K, Arc<V>>>>;

static RADIAL: Registry<TableKey, RadialTables> = OnceLock::new();
static QUANTIZER: Registry<(usize, TableKey), QuantizerCache> = OnceLock::new();

/// Shared radial tables; built once per `(grid, params)`.
pub fn radial_tables(grid: &RayGrid, params: &ReconstructionParams) -> Arc<RadialTables> {
    let key = TableKey::new(grid, params);
    let map = RADIAL.get_or_init(Default::default);
    if let Some(t) = map.lock().expect("radial cache poisoned").get(&key) {
        return t.clone();
    }
    let built = Arc::new(RadialTables::build(grid, params));
    map.lock().expect("radial cache poisoned").entry(key).or_insert(built).clone()
}

/// Shared quantizer tables; built once per `(dim, grid, params)`.
pub fn quantizer_cache(dim: usize, grid: &RayGrid, params: &ReconstructionParams) -> Arc<QuantizerCache> {
    let key = (dim, TableKey::new(grid, params));
    let map = QUANTIZER.get_or_init(Default::default);
    if let Some(t) = map.lock().expect("quantizer cache poisoned").get(&key) {
        return t.clone();
    }
    let radial = radial_tables(grid, params);
    let d = radial.k.iter().map(|&k| displacement_real(dim, k * FRAC_1_SQRT_2)).collect();
    let built = Arc::new(QuantizerCache { dim, radial, d });
    map.lock().expect("quantizer cache poisoned").entry(key).or_insert(built).clone()
}

/// `∫ f(x) D_jm(x) dx` for a symbol sampled on the ray grid, with no
/// post-processing.
///
/// Polar substitution `mu = k cos(theta)`, `nu = k sin(theta)` and
/// homogeneity reduce it to
/// `(1/2pi) ∫dθ ∫k dk d_jm(k/√2) e^{iΔθ} [F+ e^{-iΔπ/2} + F- e^{iΔπ/2}]`
/// with `Δ = j - m`.
pub fn reconstruction_moments(
    grid: &RayGrid,
    values: &[C64],
    dim: usize,
    params: &ReconstructionParams,
) -> Result<CMatrix> {
    params.validate()?;
    if values.len() != grid.len() {
        return Err(TomoError::validation("symbol length does not match grid"));
    }
    let cache = quantizer_cache(dim, grid, params);
    let radial = &cache.radial;
    let nk = radial.k.len();
    let f = radial.transform(grid, values);
    let wt = grid.dtheta();
    let span = 2 * dim - 1;
    // s[r][delta + dim - 1]
    let mut s = vec![C64::new(0.0, 0.0); nk * span];
    for (j, &theta) in grid.theta_nodes().iter().enumerate() {
        for (di, delta) in (-(dim as i64 - 1)..dim as i64).enumerate() {
            let d = delta as f64;
            let e = C64::from_polar(wt, d * theta);
            let ep = e * C64::from_polar(1.0, -d * FRAC_PI_2);
            let em = e * C64::from_polar(1.0, d * FRAC_PI_2);
            for r in 0..nk {
                let (fp, fm) = f[j * nk + r];
                s[r * span + di] += ep * fp + em * fm;
            }
        }
    }
    let mut out = CMatrix::zeros(dim, dim);
    for r in 0..nk {
        let w = radial.weight[r] / (2.0 * PI);
        if w == 0.0 {
            continue;
        }
        let d = &cache.d[r];
        for a in 0..dim {
            for b in 0..dim {
                let di = a + dim - 1 - b;
                out[(a, b)] += s[r * span + di] * (w * d[a * dim + b]);
            }
        }
    }
    Ok(out)
}

/// Reconstructed state together with the corrections applied to it.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub density: DensityMatrix,
    /// `max |R - R†|` before Hermitisation.
    pub hermiticity_residual: f64,
    /// `|Tr R - 1|` before renormalisation.
    pub trace_correction: f64,
    /// Negative eigenvalue weight removed by the PSD projection.
    pub clipped_negativity: f64,
}

pub fn density_from_tomogram(
    t: &TomogramGrid,
    spec: &HilbertSpec,
    params: &ReconstructionParams,
) -> Result<Reconstruction> {
    let values: Vec<C64> = t.values().iter().map(|&v| C64::new(v, 0.0)).collect();
    let raw = reconstruction_moments(t.grid(), &values, spec.dim(), params)?;
    let hermiticity_residual = crate::basis::max_abs(&(&raw - raw.adjoint()));
    if hermiticity_residual > tolerances::RECONSTRUCTION_RESIDUAL {
        return Err(TomoError::convergence(format!(
            "reconstruction residual {hermiticity_residual:.3e}; raise k_max or n_x"
        )));
    }
    let h = hermitize(&raw);
    let tr = h.trace().re;
    if !tr.is_finite() || tr <= 0.0 {
        return Err(TomoError::convergence(format!("reconstructed trace {tr:.3e} is not positive")));
    }
    let (psd, clipped) = project_psd(&(h * C64::new(1.0 / tr, 0.0)));
    let tr2 = psd.trace().re;
    let density = DensityMatrix::new(Operator::new(psd * C64::new(1.0 / tr2, 0.0))?)?;
    Ok(Reconstruction {
        density,
        hermiticity_residual,
        trace_correction: (tr - 1.0).abs(),
        clipped_negativity: clipped,
    })
}

/// Inverse of [`super::symbol_from_operator`]; no reality or trace
/// constraints are imposed.
pub fn operator_from_symbol(f: &SymbolGrid, spec: &HilbertSpec, params: &ReconstructionParams) -> Result<Operator> {
    if f.kind == SymbolKind::Generalized {
        return Err(TomoError::Generalized(format!(
            "symbol '{}' is a distribution and has no pointwise inverse",
            f.tag
        )));
    }
    Operator::new(reconstruction_moments(f.grid(), f.values(), spec.dim(), params)?)
}

/// Radial Fourier data of a symbol, reused by the scalar product.
pub(crate) fn fourier_data(f: &SymbolGrid, params: &ReconstructionParams) -> (Arc<RadialTables>, Vec<(C64, C64)>) {
    let radial = radial_tables(f.grid(), params);
    let data = radial.transform(f.grid(), f.values());
    (radial, data)
}
