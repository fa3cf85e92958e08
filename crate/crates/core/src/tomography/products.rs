// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use super::reconstruct::{fourier_data, operator_from_symbol, ReconstructionParams};
use super::transform::{symbol_from_operator, SymbolGrid, SymbolKind, TomogramGrid};
use crate::basis::{HilbertSpec, Operator};
use crate::{Result, TomoError, C64};

fn require_regular(f: &SymbolGrid) -> Result<()> {
    if f.kind == SymbolKind::Generalized {
        return Err(TomoError::Generalized(format!(
            "symbol '{}' is delta-bearing; products need its regularised form",
            f.tag
        )));
    }
    Ok(())
}

fn require_same_grid(f: &SymbolGrid, g: &SymbolGrid) -> Result<()> {
    if f.grid() != g.grid() {
        return Err(TomoError::validation("symbols live on different ray grids"));
    }
    Ok(())
}

/// `(f, g)`, normalised so that `(f_A, f_B) = Tr{A† B}`; in particular
/// `(T, T) = Tr rho²` is 1 for a pure state.
///
/// Evaluated in the polar form
/// `(1/2pi) ∫dθ ∫k dk [conj(F-) G- + conj(F+) G+]`.
pub fn scalar_product(f: &SymbolGrid, g: &SymbolGrid, params: &ReconstructionParams) -> Result<C64> {
    require_regular(f)?;
    require_regular(g)?;
    require_same_grid(f, g)?;
    params.validate()?;
    let (radial, ff) = fourier_data(f, params);
    let (_, gg) = fourier_data(g, params);
    let nk = radial.k.len();
    let wt = f.grid().dtheta();
    let mut acc = C64::new(0.0, 0.0);
    for (idx, ((fp, fm), (gp, gm))) in ff.iter().zip(&gg).enumerate() {
        let w = radial.weight[idx % nk];
        acc += (fp.conj() * gp + fm.conj() * gm) * w;
    }
    Ok(acc * (wt / (2.0 * PI)))
}

pub fn tomogram_scalar_product(a: &TomogramGrid, b: &TomogramGrid, params: &ReconstructionParams) -> Result<f64> {
    Ok(scalar_product(&a.as_symbol(), &b.as_symbol(), params)?.re)
}

/// `f ⋆ g` through the operator domain: both symbols are inverted, the
/// matrices multiplied and the product mapped back.
pub fn star_product(
    f: &SymbolGrid,
    g: &SymbolGrid,
    spec: &HilbertSpec,
    params: &ReconstructionParams,
) -> Result<SymbolGrid> {
    require_same_grid(f, g)?;
    let a = operator_from_symbol(f, spec, params)?;
    let b = operator_from_symbol(g, spec, params)?;
    let ab = Operator::new(a.matrix() * b.matrix())?;
    let mut out = symbol_from_operator(&ab, f.grid());
    out.tag = format!("{} ⋆ {}", f.tag, g.tag);
    Ok(out)
}

/// `alpha_k = (T, T_k)`.
pub fn decomposition_coefficients(
    t: &TomogramGrid,
    basis: &[TomogramGrid],
    params: &ReconstructionParams,
) -> Result<Vec<f64>> {
    let f = t.as_symbol();
    basis.iter().map(|b| Ok(scalar_product(&b.as_symbol(), &f, params)?.re)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{make_state, DensityMatrix, StateKind};
    use crate::tomography::{tomogram_from_density, RayGrid};
    use crate::CMatrix;

    #[test]
    fn purity_anchor() {
        let grid = RayGrid::default();
        let p = ReconstructionParams::default();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pure = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(0.0, s)]).unwrap();
        let t = tomogram_from_density(&pure, &grid).unwrap();
        assert!((tomogram_scalar_product(&t, &t, &p).unwrap() - 1.0).abs() < 1e-6);
        let mixed = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
        let t = tomogram_from_density(&mixed, &grid).unwrap();
        assert!((tomogram_scalar_product(&t, &t, &p).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn hilbert_schmidt_for_operators() {
        let grid = RayGrid::new(8.0, 257, 32).unwrap();
        let p = ReconstructionParams::default();
        let a = Operator::new(CMatrix::from_fn(3, 3, |i, j| C64::new(i as f64 - 0.5, 0.3 * j as f64))).unwrap();
        let b = Operator::new(CMatrix::from_fn(3, 3, |i, j| C64::new(0.2 * j as f64, 1.0 - i as f64))).unwrap();
        let v = scalar_product(&symbol_from_operator(&a, &grid), &symbol_from_operator(&b, &grid), &p).unwrap();
        assert!((v - a.hs_inner(&b)).norm() < 1e-8, "{v} vs {}", a.hs_inner(&b));
    }

    #[test]
    fn mixture_weights_recovered() {
        let grid = RayGrid::default();
        let spec = HilbertSpec::new(4).unwrap();
        let p = ReconstructionParams::default();
        let t0 = tomogram_from_density(&make_state(&spec, &StateKind::Fock { n: 0 }).unwrap().density, &grid).unwrap();
        let t1 = tomogram_from_density(&make_state(&spec, &StateKind::Fock { n: 1 }).unwrap().density, &grid).unwrap();
        let mix = DensityMatrix::from_diagonal(&[0.3, 0.7, 0.0, 0.0]).unwrap();
        let t = tomogram_from_density(&mix, &grid).unwrap();
        let a = decomposition_coefficients(&t, &[t0.clone(), t1.clone()], &p).unwrap();
        assert!((a[0] - 0.3).abs() < 1e-6 && (a[1] - 0.7).abs() < 1e-6);
        assert!(tomogram_scalar_product(&t0, &t1, &p).unwrap().abs() < 1e-8);
    }

    #[test]
    fn generalized_symbols_are_refused() {
        let grid = RayGrid::new(6.0, 65, 8).unwrap();
        let f = symbol_from_operator(&Operator::identity(2), &grid).generalized();
        let err = scalar_product(&f, &f, &ReconstructionParams::default()).unwrap_err();
        assert!(matches!(err, TomoError::Generalized(_)));
    }
}
