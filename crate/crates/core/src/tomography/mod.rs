// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Dequantizer and quantizer elements, tomograms and operator symbols on a
//! ray grid, the inverse transform, and the star and scalar products.

mod grid;
mod products;
mod reconstruct;
mod transform;

pub use grid::{to_unit_ray, RayGrid, RayGridParams};
pub use products::{decomposition_coefficients, scalar_product, star_product, tomogram_scalar_product};
pub use reconstruct::{
    density_from_tomogram, operator_from_symbol, quantizer_cache, radial_tables, reconstruction_moments,
    QuantizerCache, RadialTables, Reconstruction, ReconstructionParams,
};
pub use transform::{
    dequantizer_element, dequantizer_element_general, quantizer_element, symbol_from_operator,
    tomogram_from_density, tomogram_from_hermitian, SymbolGrid, SymbolKind, TomogramGrid,
};

