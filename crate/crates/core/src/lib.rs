// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Operator-sum (Kraus) quantum processes in the symplectic tomography
//! representation.
//!
//! States and operators live in a truncated harmonic-oscillator basis
//! ([`basis`]), are mapped to tomograms and operator symbols on a ray grid
//! ([`tomography`]), and are transformed by process kernels built from Kraus
//! sets ([`kernels`]). Ready-made channels are in [`channels`]. Every
//! tomographic route can be checked against the density-matrix oracle
//! [`basis::apply_channel_oracle`].

pub mod basis;
pub mod channels;
pub mod error;
pub mod kernels;
pub mod quadrature;
pub mod tolerances;
pub mod tomography;

pub use error::{Result, TomoError};

pub use num_complex::Complex64 as C64;

/// Dense complex matrix used for every operator in the truncated basis.
pub type CMatrix = nalgebra::DMatrix<C64>;
