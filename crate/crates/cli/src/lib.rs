// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end of `tomo-core`: state preparation, tomograms,
//! channels, kernel export and verification suites, with deterministic
//! JSON and CSV output.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod json;
pub mod report;
pub mod states;
pub mod verify;

pub use config::{Flags, RunConfig};
pub use error::{CliError, CliResult};
