// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Default tolerances. Verification suites and reports read these values;
//! nothing else should hard-code a threshold.

use serde::{Deserialize, Serialize};

/// Hermiticity of a density matrix, max-abs of `rho - rho^dagger`.
pub const HERMITIAN: f64 = 1e-12;
/// Unit trace of a density matrix.
pub const TRACE: f64 = 1e-12;
/// Smallest eigenvalue accepted as round-off of a PSD matrix.
pub const PSD_FLOOR: f64 = -1e-10;
/// Unitarity of a joint system-environment evolution.
pub const UNITARY: f64 = 1e-10;
/// Completeness of analytic Kraus sets.
pub const COMPLETE_ANALYTIC: f64 = 1e-8;
/// Completeness of quadrature-discretised continuous Kraus families.
pub const COMPLETE_QUADRATURE: f64 = 1e-4;
/// Imaginary residue allowed before a tomogram is declared real.
pub const REALITY: f64 = 1e-10;
/// Per-ray normalisation drift that signals an under-resolved grid.
pub const GRID_NORMALIZATION: f64 = 1e-4;
/// Pre-Hermitisation asymmetry that signals a failed reconstruction.
pub const RECONSTRUCTION_RESIDUAL: f64 = 1e-3;
/// Truncation leakage above which state construction warns.
pub const LEAKAGE_WARN: f64 = 1e-6;

/// Tolerance block carried by every run configuration and report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Round-trip infidelity `1 - F(rho, rho_rec)`.
    pub round_trip_infidelity: f64,
    /// Max-abs tomogram discrepancy, qubit (dim 2) channels.
    pub oracle_qubit: f64,
    /// Max-abs tomogram discrepancy, oscillator (dim 16) channels.
    pub oracle_oscillator: f64,
    /// Relative error of measured decoherence factors.
    pub decoherence_relative: f64,
    /// Gaussian blur versus coordinate-decoherence oracle.
    pub blur_oracle: f64,
    /// Relative error of the fitted blur width.
    pub blur_sigma_relative: f64,
    /// Completeness residual of a complete set.
    pub completeness_pass: f64,
    /// Residual that must be exceeded by a deliberately broken set.
    pub completeness_violation: f64,
    /// Star product against matrix product.
    pub star_product: f64,
    /// Purity anchors of the scalar product.
    pub purity: f64,
    /// Canonical commutator away from the truncation edge.
    pub commutator: f64,
    /// Structured versus brute-force kernel application.
    pub route_vs_route: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            round_trip_infidelity: 1e-6,
            oracle_qubit: 1e-5,
            oracle_oscillator: 1e-4,
            decoherence_relative: 1e-6,
            blur_oracle: 1e-4,
            blur_sigma_relative: 0.02,
            completeness_pass: 1e-4,
            completeness_violation: 0.05,
            star_product: 1e-6,
            purity: 1e-6,
            commutator: 1e-5,
            route_vs_route: 1e-3,
        }
    }
}
