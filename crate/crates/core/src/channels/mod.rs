// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! Channel library: qubit channels, projective and Gaussian measurements, the
//! pointer-coupled measurement model, and a name registry.

mod gaussian_position;
mod projectors;
mod qubit;
mod von_neumann;

pub use gaussian_position::{GaussianPositionChannel, SelectiveRoute};
pub use projectors::{
    basis_projector_kernel, dephasing_kernel, dephasing_kraus, double_tomogram_integral, GaussianBasisProjector,
};
pub use qubit::{basis_tomogram_moment, ClosedFormKernel, QubitChannel};
pub use von_neumann::{decoherence_deviation, VonNeumannModel};

use serde::{Deserialize, Serialize};

use crate::basis::{apply_channel_oracle, DensityMatrix, KrausSet, Operator};
use crate::kernels::{apply_kernel, total_kernel, ProcessKernel};
use crate::tomography::{ReconstructionParams, TomogramGrid};
use crate::{Result, TomoError, C64};

/// Registry names, in listing order.
pub const CHANNEL_NAMES: [&str; 9] = [
    "identity",
    "phase-flip",
    "amp-damp",
    "basis-proj",
    "dephase",
    "gauss-proj",
    "von-neumann",
    "vn-pointer",
    "gauss-pos",
];

/// A library channel with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "channel", rename_all = "kebab-case")]
pub enum ChannelSpec {
    Identity,
    PhaseFlip { p: f64 },
    AmpDamp { gamma: f64 },
    BasisProj { m: usize },
    Dephase,
    GaussProj { kappa: f64 },
    VonNeumann { g: f64, kappa: f64 },
    /// Pointer side: shifts `g a_j` with probabilities `weights`.
    VnPointer { g: f64, eigenvalues: Vec<f64>, weights: Vec<f64> },
    GaussPos { kappa: f64 },
}

fn param<T: std::str::FromStr>(params: &[(String, String)], key: &str, default: T) -> Result<T> {
    match params.iter().find(|(k, _)| k == key) {
        None => Ok(default),
        Some((_, v)) => v.parse().map_err(|_| TomoError::validation(format!("parameter {key}={v} does not parse"))),
    }
}

fn list(params: &[(String, String)], key: &str) -> Result<Option<Vec<f64>>> {
    match params.iter().find(|(k, _)| k == key) {
        None => Ok(None),
        Some((_, v)) => v
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| TomoError::validation(format!("parameter {key}: '{x}' is not a number"))))
            .collect::<Result<Vec<f64>>>()
            .map(Some),
    }
}

impl ChannelSpec {
    /// Parses a registry name with `key=value` parameters (lists are
    /// comma-separated).
    pub fn parse(name: &str, params: &[(String, String)]) -> Result<Self> {
        let allowed: &[&str] = match name {
            "identity" | "dephase" => &[],
            "phase-flip" => &["p"],
            "amp-damp" => &["gamma"],
            "basis-proj" => &["m"],
            "gauss-proj" | "gauss-pos" => &["kappa"],
            "von-neumann" => &["g", "kappa"],
            "vn-pointer" => &["g", "a", "w"],
            _ => {
                return Err(TomoError::validation(format!(
                    "unknown channel '{name}'; known: {}",
                    CHANNEL_NAMES.join(", ")
                )))
            }
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(TomoError::validation(format!("channel '{name}' has no parameter '{k}'")));
        }
        let spec = match name {
            "identity" => ChannelSpec::Identity,
            "dephase" => ChannelSpec::Dephase,
            "phase-flip" => ChannelSpec::PhaseFlip { p: param(params, "p", 0.5)? },
            "amp-damp" => ChannelSpec::AmpDamp { gamma: param(params, "gamma", 0.5)? },
            "basis-proj" => ChannelSpec::BasisProj { m: param(params, "m", 0)? },
            "gauss-proj" => ChannelSpec::GaussProj { kappa: param(params, "kappa", 1.0)? },
            "gauss-pos" => ChannelSpec::GaussPos { kappa: param(params, "kappa", 1.0)? },
            "von-neumann" => ChannelSpec::VonNeumann { g: param(params, "g", 0.5)?, kappa: param(params, "kappa", 1.0)? },
            _ => {
                let eigenvalues = list(params, "a")?.unwrap_or_else(|| vec![0.0, 1.0]);
                let n = eigenvalues.len();
                let weights = list(params, "w")?.unwrap_or_else(|| vec![1.0 / n as f64; n]);
                ChannelSpec::VnPointer { g: param(params, "g", 1.0)?, eigenvalues, weights }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        match self {
            ChannelSpec::PhaseFlip { p } => QubitChannel::new_phase_flip(*p).map(|_| ()),
            ChannelSpec::AmpDamp { gamma } => QubitChannel::new_amplitude_damping(*gamma).map(|_| ()),
            ChannelSpec::GaussProj { kappa } | ChannelSpec::GaussPos { kappa } | ChannelSpec::VonNeumann { kappa, .. } => {
                if *kappa > 0.0 && kappa.is_finite() {
                    Ok(())
                } else {
                    Err(TomoError::validation(format!("kappa {kappa} must be positive")))
                }
            }
            ChannelSpec::VnPointer { eigenvalues, weights, .. } => {
                if eigenvalues.len() != weights.len() {
                    return Err(TomoError::validation("vn-pointer needs one weight per eigenvalue"));
                }
                let s: f64 = weights.iter().sum();
                if weights.iter().any(|w| *w < 0.0) || (s - 1.0).abs() > 1e-10 {
                    return Err(TomoError::validation(format!("vn-pointer weights sum to {s}")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelSpec::Identity => "identity",
            ChannelSpec::PhaseFlip { .. } => "phase-flip",
            ChannelSpec::AmpDamp { .. } => "amp-damp",
            ChannelSpec::BasisProj { .. } => "basis-proj",
            ChannelSpec::Dephase => "dephase",
            ChannelSpec::GaussProj { .. } => "gauss-proj",
            ChannelSpec::VonNeumann { .. } => "von-neumann",
            ChannelSpec::VnPointer { .. } => "vn-pointer",
            ChannelSpec::GaussPos { .. } => "gauss-pos",
        }
    }

    /// Selective channels output a tomogram density, not a normalised tomogram.
    pub fn is_selective(&self) -> bool {
        matches!(self, ChannelSpec::BasisProj { .. })
    }

    fn qubit(&self) -> Option<QubitChannel> {
        match *self {
            ChannelSpec::PhaseFlip { p } => Some(QubitChannel::PhaseFlip { p }),
            ChannelSpec::AmpDamp { gamma } => Some(QubitChannel::AmplitudeDamping { gamma }),
            _ => None,
        }
    }

    fn pointer_model(&self) -> Option<VonNeumannModel> {
        match self {
            ChannelSpec::VnPointer { g, eigenvalues, weights } => {
                let amps = weights.iter().map(|w| C64::new(w.sqrt(), 0.0)).collect();
                VonNeumannModel::new(eigenvalues.clone(), amps, *g, 2.0, 16).ok()
            }
            _ => None,
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim < 2 {
            return Err(TomoError::validation("dimension < 2"));
        }
        if self.qubit().is_some() && dim != 2 {
            return Err(TomoError::validation(format!("{} acts on a qubit; dimension {dim} given", self.name())));
        }
        if let ChannelSpec::BasisProj { m } = self {
            if *m >= dim {
                return Err(TomoError::validation(format!("projector index {m} outside dimension {dim}")));
            }
        }
        Ok(())
    }

    /// Kraus set on `dim` levels; `None` for channels kept in structural form.
    pub fn kraus(&self, dim: usize) -> Result<Option<KrausSet>> {
        self.check_dim(dim)?;
        Ok(match self {
            ChannelSpec::Identity => Some(KrausSet::identity(dim)),
            ChannelSpec::PhaseFlip { .. } | ChannelSpec::AmpDamp { .. } => Some(self.qubit().expect("qubit").kraus()),
            ChannelSpec::BasisProj { m } => {
                Some(KrausSet::discrete(vec![Operator::matrix_unit(dim, *m, *m)]).expect("projector is valid"))
            }
            ChannelSpec::Dephase => Some(dephasing_kraus(dim)),
            ChannelSpec::GaussProj { kappa } => Some(GaussianBasisProjector::new(*kappa, dim)?.kraus()?),
            ChannelSpec::VonNeumann { g, kappa } => Some(VonNeumannModel::ladder(dim, *g, *kappa)?.system_kraus()?),
            ChannelSpec::VnPointer { .. } | ChannelSpec::GaussPos { .. } => None,
        })
    }

    pub fn kernel(&self, dim: usize) -> Result<ProcessKernel> {
        self.check_dim(dim)?;
        match self {
            ChannelSpec::VnPointer { .. } => Ok(self.pointer_model().expect("validated").pointer_kernel()),
            ChannelSpec::GaussPos { kappa } => Ok(GaussianPositionChannel::new(*kappa)?.nonselective_kernel()),
            ChannelSpec::BasisProj { m } => basis_projector_kernel(dim, *m),
            _ => {
                let kraus = self.kraus(dim)?.expect("tensor channels have Kraus sets");
                Ok(total_kernel(&kraus, format!("{self}")))
            }
        }
    }

    /// Tomographic route: the kernel applied to `t`, a tomogram of a
    /// `dim`-level state.
    pub fn apply(&self, t: &TomogramGrid, dim: usize, params: &ReconstructionParams) -> Result<TomogramGrid> {
        apply_kernel(t, &self.kernel(dim)?, params)
    }

    /// Density-matrix route. Channels that move weight out of the input
    /// levels return a larger matrix.
    pub fn oracle(&self, rho: &DensityMatrix) -> Result<Operator> {
        let dim = rho.dim();
        self.check_dim(dim)?;
        match self {
            ChannelSpec::VnPointer { .. } => self.pointer_model().expect("validated").pointer_oracle(rho),
            ChannelSpec::GaussPos { kappa } => GaussianPositionChannel::new(*kappa)?.coordinate_oracle(rho, dim + 30),
            _ => {
                let kraus = self.kraus(dim)?.expect("tensor channels have Kraus sets");
                Ok(apply_channel_oracle(rho, &kraus)?.rho)
            }
        }
    }
}

impl std::fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            ChannelSpec::Identity | ChannelSpec::Dephase => write!(f, "{}", self.name()),
            ChannelSpec::PhaseFlip { p } => write!(f, "phase-flip(p={p})"),
            ChannelSpec::AmpDamp { gamma } => write!(f, "amp-damp(gamma={gamma})"),
            ChannelSpec::BasisProj { m } => write!(f, "basis-proj(m={m})"),
            ChannelSpec::GaussProj { kappa } => write!(f, "gauss-proj(kappa={kappa})"),
            ChannelSpec::GaussPos { kappa } => write!(f, "gauss-pos(kappa={kappa})"),
            ChannelSpec::VonNeumann { g, kappa } => write!(f, "von-neumann(g={g}, kappa={kappa})"),
            ChannelSpec::VnPointer { g, eigenvalues, weights } => {
                write!(f, "vn-pointer(g={g}, a={}, w={})", join(eigenvalues), join(weights))
            }
        }
    }
}
