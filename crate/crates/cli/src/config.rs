// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: every parameter a command reads, validated and hashed.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tomo_core::basis::StateKind;
use tomo_core::channels::ChannelSpec;
use tomo_core::tolerances::Tolerances;
use tomo_core::tomography::{RayGrid, RayGridParams, ReconstructionParams};

use crate::error::{CliError, CliResult};
use crate::json;

/// Largest truncation accepted from the command line.
pub const MAX_DIM: usize = 64;

/// Flags shared by every subcommand. `None` means "use the command default".
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub dim: Option<usize>,
    pub xmax: Option<f64>,
    pub nx: Option<usize>,
    pub ntheta: Option<usize>,
    pub kmax: Option<f64>,
    pub out: Option<PathBuf>,
    pub method: Option<String>,
    /// `key=value` tolerance overrides.
    pub tol: Vec<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Tomographic,
    Oracle,
    Both,
}

impl Method {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "tomographic" => Ok(Method::Tomographic),
            "oracle" => Ok(Method::Oracle),
            "both" => Ok(Method::Both),
            _ => Err(CliError::usage(format!("unknown method '{s}' (tomographic|oracle|both)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub args: Vec<String>,
    pub grid: RayGridParams,
    pub reconstruction: ReconstructionParams,
    pub dim: Option<usize>,
    pub method: Option<Method>,
    pub channel: Option<ChannelSpec>,
    pub state: Option<StateKind>,
    /// SHA-256 of a density file given with `--state`.
    pub state_file_sha256: Option<String>,
    /// Outcome of a selective measurement.
    pub selective: Option<f64>,
    pub reconstruct: bool,
    pub drop_kraus: Option<usize>,
    pub scale_kraus: Option<usize>,
    pub drop_window: Option<f64>,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Output location; not part of the hash.
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Resolves flags against per-command defaults and validates the ranges.
    pub fn new(command: &str, args: Vec<String>, flags: &Flags, grid_default: RayGridParams) -> CliResult<Self> {
        let grid = RayGridParams {
            x_max: flags.xmax.unwrap_or(grid_default.x_max),
            n_x: flags.nx.unwrap_or(grid_default.n_x),
            n_theta: flags.ntheta.unwrap_or(grid_default.n_theta),
        };
        let mut reconstruction = ReconstructionParams::default();
        if let Some(k) = flags.kmax {
            reconstruction.k_max = k;
        }
        let cfg = RunConfig {
            command: command.to_string(),
            args,
            grid,
            reconstruction,
            dim: flags.dim,
            method: flags.method.as_deref().map(Method::parse).transpose()?,
            channel: None,
            state: None,
            state_file_sha256: None,
            selective: None,
            reconstruct: false,
            drop_kraus: None,
            scale_kraus: None,
            drop_window: None,
            seed: flags.seed.unwrap_or(7),
            tolerances: apply_overrides(Tolerances::default(), &flags.tol)?,
            out: flags.out.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        RayGrid::try_from(self.grid)?;
        self.reconstruction.validate()?;
        if let Some(d) = self.dim {
            if !(2..=MAX_DIM).contains(&d) {
                return Err(tomo_core::TomoError::validation(format!("dimension {d} outside [2, {MAX_DIM}]")).into());
            }
        }
        Ok(())
    }

    pub fn ray_grid(&self) -> CliResult<RayGrid> {
        Ok(RayGrid::try_from(self.grid)?)
    }

    pub fn dim_or(&self, default: usize) -> usize {
        self.dim.unwrap_or(default)
    }

    /// SHA-256 over the canonical JSON of everything except the output path.
    pub fn hash(&self) -> String {
        let text = json::to_pretty(self).expect("config serialises");
        hex(&Sha256::digest(text.as_bytes()))
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Applies `key=value` overrides to the tolerance block.
pub fn apply_overrides(base: Tolerances, overrides: &[String]) -> CliResult<Tolerances> {
    if overrides.is_empty() {
        return Ok(base);
    }
    let mut v = serde_json::to_value(base)?;
    let map = v.as_object_mut().expect("tolerances serialise to an object");
    for o in overrides {
        let (k, val) = o.split_once('=').ok_or_else(|| CliError::usage(format!("--tol expects key=value, got '{o}'")))?;
        let x: f64 = val.parse().map_err(|_| CliError::usage(format!("--tol {k}: '{val}' is not a number")))?;
        if x <= 0.0 || !x.is_finite() {
            return Err(CliError::usage(format!("--tol {k}: tolerance must be positive")));
        }
        if !map.contains_key(k) {
            let known: Vec<&str> = map.keys().map(String::as_str).collect();
            return Err(CliError::usage(format!("unknown tolerance '{k}' (known: {})", known.join(", "))));
        }
        let slot = map.get_mut(k).expect("checked above");
        *slot = serde_json::json!(x);
    }
    Ok(serde_json::from_value(v)?)
}
