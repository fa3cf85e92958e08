// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;
use tomo_core::TomoError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Tomo(#[from] TomoError),
    #[error("{0}")]
    Io(String),
    /// A verification ran to completion and at least one check failed.
    #[error("{0}")]
    CheckFailed(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Tomo(TomoError::Validation(_)) => "validation",
            CliError::Tomo(TomoError::Convergence(_)) => "convergence",
            CliError::Tomo(TomoError::Domain(_)) => "domain",
            CliError::Tomo(TomoError::Generalized(_)) => "generalized",
            CliError::Tomo(TomoError::Budget(_)) => "budget",
            CliError::Io(_) => "io",
            CliError::CheckFailed(_) => "check-failed",
        }
    }

    /// 0 ok, 1 failed check, 2 usage, 3 validation, 4 convergence.
    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Tomo(TomoError::Convergence(_)) => 4,
            _ => 3,
        }
    }

    /// `error code=<code> msg="<message>"` on one line.
    pub fn line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ").replace('\\', "\\\\").replace('"', "\\\"");
        format!("error code={} msg=\"{}\"", self.code(), msg)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(format!("json: {e}"))
    }
}
