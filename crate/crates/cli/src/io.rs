// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! File formats.
//!
//! * density matrix: JSON `{format, dim, leakage, descriptor, data}` with
//!   `data` the row-major list of `[re, im]` pairs;
//! * tomograms and symbols: CSV with `# key=value` header lines, then
//!   `theta,X,T` rows ordered by ray, then by `X`;
//! * kernels: JSON tensor plus an optional dense CSV view.
//!
//! Every float is written as `{:.12e}`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tomo_core::basis::{hermitize, DensityMatrix, Operator, StateKind};
use tomo_core::tomography::TomogramGrid;
use tomo_core::{CMatrix, TomoError, C64};

use crate::config::hex;
use crate::error::{CliError, CliResult};
use crate::json::{self, fmt_f64};

pub const DENSITY_FORMAT: &str = "tomo-density/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityFile {
    pub format: String,
    pub dim: usize,
    pub leakage: f64,
    pub descriptor: Option<StateKind>,
    pub data: Vec<[f64; 2]>,
}

impl DensityFile {
    pub fn new(rho: &CMatrix, leakage: f64, descriptor: Option<StateKind>) -> Self {
        let n = rho.nrows();
        let data = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| [rho[(i, j)].re, rho[(i, j)].im]).collect();
        DensityFile { format: DENSITY_FORMAT.into(), dim: n, leakage, descriptor, data }
    }

    pub fn to_json(&self) -> CliResult<String> {
        json::to_pretty(self)
    }

    /// Rebuilds the matrix. Rounding to 13 significant digits is undone by
    /// re-Hermitising and renormalising the trace.
    pub fn density(&self) -> CliResult<DensityMatrix> {
        if self.format != DENSITY_FORMAT {
            return Err(TomoError::validation(format!("unsupported density format '{}'", self.format)).into());
        }
        let n = self.dim;
        if n < 2 || self.data.len() != n * n {
            return Err(TomoError::validation(format!("density data has {} entries, dim {n}", self.data.len())).into());
        }
        let m = CMatrix::from_fn(n, n, |i, j| C64::new(self.data[i * n + j][0], self.data[i * n + j][1]));
        let m = hermitize(&m);
        let tr = m.trace().re;
        if !tr.is_finite() || tr <= 0.0 {
            return Err(TomoError::validation("density trace is not positive").into());
        }
        Ok(DensityMatrix::new(Operator::new(m / C64::new(tr, 0.0))?)?)
    }
}

/// Reads a density file; returns the state and the SHA-256 of the file.
pub fn read_density(path: &Path) -> CliResult<(DensityMatrix, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file: DensityFile = serde_json::from_str(&text)?;
    Ok((file.density()?, hex(&Sha256::digest(text.as_bytes()))))
}

pub fn tomogram_csv(t: &TomogramGrid, header: &[(String, String)]) -> String {
    let grid = t.grid();
    let mut s = String::with_capacity(grid.len() * 64);
    let _ = writeln!(s, "# tomo tomogram");
    let _ = writeln!(s, "# x_max={}", fmt_f64(grid.x_max()));
    let _ = writeln!(s, "# n_x={}", grid.n_x());
    let _ = writeln!(s, "# n_theta={}", grid.n_theta());
    if !t.provenance.is_empty() {
        let _ = writeln!(s, "# provenance={}", t.provenance.join(" | "));
    }
    for (k, v) in header {
        let _ = writeln!(s, "# {k}={v}");
    }
    s.push_str("theta,X,T\n");
    for (j, &theta) in grid.theta_nodes().iter().enumerate() {
        for (&x, v) in grid.x_nodes().iter().zip(t.row(j)) {
            let _ = writeln!(s, "{},{},{}", fmt_f64(theta), fmt_f64(x), fmt_f64(*v));
        }
    }
    s
}

/// Header `key=value` pairs and `(theta, X, T)` rows.
pub type ParsedCsv = (Vec<(String, String)>, Vec<[f64; 3]>);

pub fn parse_tomogram_csv(text: &str) -> CliResult<ParsedCsv> {
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(h) = line.strip_prefix("# ") {
            if let Some((k, v)) = h.split_once('=') {
                header.push((k.to_string(), v.to_string()));
            }
        } else if line == "theta,X,T" || line.is_empty() {
            continue;
        } else {
            let f: Vec<f64> = line
                .split(',')
                .map(|x| x.parse::<f64>().map_err(|_| CliError::Io(format!("bad CSV value '{x}'"))))
                .collect::<CliResult<_>>()?;
            if f.len() != 3 {
                return Err(CliError::Io(format!("expected 3 columns, got {}", f.len())));
            }
            rows.push([f[0], f[1], f[2]]);
        }
    }
    Ok((header, rows))
}

/// `<out><suffix>`, e.g. `run` + `.report.json`.
pub fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn write_file(path: &Path, content: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
