// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

//! State descriptors on the command line and seeded random states.
//!
//! Grammar: `fock N`, `coherent RE IM`, `thermal NBAR`,
//! `mixture W1 C1 W2 C2 ...` with compact components `fock0`,
//! `thermal:1.0`, `coherent:0.5:-0.2`. A single compact token is also a
//! descriptor.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tomo_core::basis::{hermitize, DensityMatrix, Operator, StateKind};
use tomo_core::{CMatrix, C64};

use crate::error::{CliError, CliResult};

fn num<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<T> {
    s.parse().map_err(|_| CliError::usage(format!("{what}: '{s}' is not a valid number")))
}

pub fn parse_compact(token: &str) -> CliResult<StateKind> {
    let parts: Vec<&str> = token.split(':').collect();
    match parts.as_slice() {
        [f] if f.starts_with("fock") && f.len() > 4 => Ok(StateKind::Fock { n: num(&f[4..], "fock level")? }),
        ["fock", n] => Ok(StateKind::Fock { n: num(n, "fock level")? }),
        ["thermal", nbar] => Ok(StateKind::Thermal { nbar: num(nbar, "thermal occupation")? }),
        ["coherent", re, im] => Ok(StateKind::Coherent { re: num(re, "coherent re")?, im: num(im, "coherent im")? }),
        _ => Err(CliError::usage(format!("unknown state component '{token}'"))),
    }
}

pub fn parse_descriptor(tokens: &[String]) -> CliResult<StateKind> {
    let t: Vec<&str> = tokens.iter().map(String::as_str).collect();
    match t.as_slice() {
        [] => Err(CliError::usage("missing state descriptor")),
        ["fock", n] => Ok(StateKind::Fock { n: num(n, "fock level")? }),
        ["coherent", re, im] => Ok(StateKind::Coherent { re: num(re, "coherent re")?, im: num(im, "coherent im")? }),
        ["thermal", nbar] => Ok(StateKind::Thermal { nbar: num(nbar, "thermal occupation")? }),
        ["mixture", rest @ ..] => {
            if rest.is_empty() || rest.len() % 2 != 0 {
                return Err(CliError::usage("mixture expects weight/component pairs"));
            }
            let components = rest
                .chunks(2)
                .map(|c| Ok((num::<f64>(c[0], "mixture weight")?, parse_compact(c[1])?)))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(StateKind::Mixture { components })
        }
        [single] => parse_compact(single),
        _ => Err(CliError::usage(format!("unknown state descriptor '{}'", t.join(" ")))),
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> nalgebra::DVector<C64> {
    // Gaussian entries give a Haar-distributed direction.
    let v = nalgebra::DVector::from_fn(n, |_, _| {
        let (u1, u2): (f64, f64) = (rng.random::<f64>().max(f64::MIN_POSITIVE), rng.random());
        let r = (-2.0 * u1.ln()).sqrt();
        let a = 2.0 * std::f64::consts::PI * u2;
        C64::new(r * a.cos(), r * a.sin())
    });
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Mixture of two Haar-random pure states with weights `p`, `1 - p`,
/// `p` uniform in `[0.5, 0.95]`.
pub fn random_rank2(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
    let p: f64 = rng.random_range(0.5..0.95);
    let mut m = CMatrix::zeros(n, n);
    for w in [p, 1.0 - p] {
        let v = random_vector(rng, n);
        m += &v * v.adjoint() * C64::new(w, 0.0);
    }
    DensityMatrix::new(Operator::new(hermitize(&m)).expect("finite")).expect("valid density")
}

/// Haar-random pure state.
pub fn random_pure(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
    let v = random_vector(rng, n);
    DensityMatrix::pure(v.as_slice()).expect("unit vector")
}

/// Complex matrix with entries uniform in the unit square around 0.
pub fn random_operator(rng: &mut ChaCha8Rng, n: usize) -> Operator {
    Operator::new(CMatrix::from_fn(n, n, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)))
        .expect("finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn descriptors() {
        assert_eq!(parse_descriptor(&toks("fock 0")).unwrap(), StateKind::Fock { n: 0 });
        assert_eq!(parse_descriptor(&toks("fock3")).unwrap(), StateKind::Fock { n: 3 });
        assert_eq!(
            parse_descriptor(&toks("mixture 0.5 fock0 0.5 fock1")).unwrap(),
            StateKind::Mixture {
                components: vec![(0.5, StateKind::Fock { n: 0 }), (0.5, StateKind::Fock { n: 1 })]
            }
        );
        assert_eq!(parse_descriptor(&toks("coherent:0.5:-0.2")).unwrap(), StateKind::Coherent { re: 0.5, im: -0.2 });
        for bad in ["fock x", "mixture 0.5", "squeezed 1", "mixture 0.5 blob 0.5 fock0"] {
            assert!(matches!(parse_descriptor(&toks(bad)), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn random_states_are_seeded_and_rank_two() {
        let a = random_rank2(&mut ChaCha8Rng::seed_from_u64(1), 6);
        let b = random_rank2(&mut ChaCha8Rng::seed_from_u64(1), 6);
        assert_eq!(a.matrix(), b.matrix());
        assert!((a.operator().trace().re - 1.0).abs() < 1e-12);
        let ev = a.matrix().clone().symmetric_eigenvalues();
        assert_eq!(ev.iter().filter(|&&x| x > 1e-10).count(), 2);
    }
}
