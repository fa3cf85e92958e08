// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Comparison reports. Runtimes are kept apart so that a report depends
//! only on its configuration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use tomo_core::tolerances::Tolerances;
use tomo_core::tomography::{RayGridParams, ReconstructionParams, TomogramGrid};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::json;

pub const REPORT_FORMAT: &str = "tomo-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Passes when `value <= limit`.
    AtMost,
    /// Passes when `value > limit`.
    Exceeds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub relation: Relation,
    pub pass: bool,
    /// Tomogram discrepancies, when the check compares two tomograms.
    pub max_abs: Option<f64>,
    pub l2: Option<f64>,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, limit, relation: Relation::AtMost, pass: value <= limit, max_abs: None, l2: None }
    }

    pub fn exceeds(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, limit, relation: Relation::Exceeds, pass: value > limit, max_abs: None, l2: None }
    }

    /// Max-abs discrepancy of two tomograms against `limit`, with the L2 norm attached.
    pub fn tomograms(name: impl Into<String>, a: &TomogramGrid, b: &TomogramGrid, limit: f64) -> Self {
        let max_abs = a.max_abs_diff(b);
        let mut c = Check::at_most(name, max_abs, limit);
        c.max_abs = Some(max_abs);
        c.l2 = Some(a.l2_diff(b));
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub format: String,
    pub suite: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub grid: RayGridParams,
    pub reconstruction: ReconstructionParams,
    pub tolerances: Tolerances,
    pub checks: Vec<Check>,
    /// Named scalar results (probabilities, leakage, residual components).
    pub values: BTreeMap<String, f64>,
    pub tables: BTreeMap<String, Table>,
    pub pass: bool,
}

impl ComparisonReport {
    pub fn new(suite: impl Into<String>, config: &RunConfig) -> Self {
        ComparisonReport {
            format: REPORT_FORMAT.into(),
            suite: suite.into(),
            config_hash: config.hash(),
            config: config.clone(),
            grid: config.grid,
            reconstruction: config.reconstruction,
            tolerances: config.tolerances,
            checks: Vec::new(),
            values: BTreeMap::new(),
            tables: BTreeMap::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn value(&mut self, key: impl Into<String>, v: f64) {
        self.values.insert(key.into(), v);
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// Largest `value` among checks whose name starts with `prefix`.
    pub fn worst(&self, prefix: &str) -> Option<f64> {
        self.checks.iter().filter(|c| c.name.starts_with(prefix)).map(|c| c.value).reduce(f64::max)
    }

    pub fn to_json(&self) -> CliResult<String> {
        json::to_pretty(self)
    }
}

/// Wall-clock timings written next to a report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Runtimes(pub BTreeMap<String, f64>);

impl Runtimes {
    pub fn record(&mut self, key: impl Into<String>, seconds: f64) {
        self.0.insert(key.into(), seconds);
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: ComparisonReport,
    pub runtimes: Runtimes,
}
