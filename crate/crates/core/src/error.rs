// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = TomoError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum TomoError {
    /// Input violates a documented precondition (dimensions, weights, ranges).
    #[error("validation: {0}")]
    Validation(String),

    /// A quadrature or reconstruction did not reach its residual target.
    #[error("convergence: {0}")]
    Convergence(String),

    /// Argument outside the domain of a special function.
    #[error("domain: {0}")]
    Domain(String),

    /// Pointwise use of a distribution-valued object.
    #[error("generalized object: {0}")]
    Generalized(String),

    /// Requested computation exceeds the brute-force budget.
    #[error("budget: {0}")]
    Budget(String),
}

impl TomoError {
    pub fn validation(msg: impl Into<String>) -> Self {
        TomoError::Validation(msg.into())
    }

    pub fn convergence(msg: impl Into<String>) -> Self {
        TomoError::Convergence(msg.into())
    }
}
