// Copyright 2026 The tomo Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tomo_cli::commands::{cmd_channel, cmd_kernel, cmd_state, cmd_tomogram, ChannelArgs};
use tomo_cli::verify::{cmd_verify, VerifyOptions};
use tomo_cli::{CliError, CliResult, Flags};

#[derive(Parser)]
#[command(name = "tomo", version, about = "Quantum processes in the symplectic tomography representation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Truncation dimension of the number basis.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Half-width of the X grid.
    #[arg(long, global = true)]
    xmax: Option<f64>,
    /// Number of X nodes per ray (odd).
    #[arg(long, global = true)]
    nx: Option<usize>,
    /// Number of rays in [0, π).
    #[arg(long, global = true)]
    ntheta: Option<usize>,
    /// Radial cutoff of the reconstruction.
    #[arg(long, global = true)]
    kmax: Option<f64>,
    /// Output path (or prefix for commands writing several files).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// tomographic, oracle or both.
    #[arg(long, global = true)]
    method: Option<String>,
    /// Tolerance override KEY=VALUE; repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE")]
    tol: Vec<String>,
    /// Seed of the random states used by verification suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a density matrix: `fock N`, `coherent RE IM`, `thermal NBAR`, `mixture W C ...`.
    State {
        #[arg(required = true, allow_negative_numbers = true)]
        descriptor: Vec<String>,
    },
    /// Tomogram CSV of a state, with a summary.
    Tomogram {
        #[arg(allow_negative_numbers = true)]
        descriptor: Vec<String>,
        /// Density file instead of a descriptor.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Reconstruct the state and report the fidelity.
        #[arg(long)]
        reconstruct: bool,
    },
    /// Apply a library channel.
    Channel {
        name: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<String>,
        #[arg(long)]
        state: Option<PathBuf>,
        /// Input descriptor such as `fock1` or "coherent 0.5 0.2".
        #[arg(long, allow_hyphen_values = true)]
        input: Option<String>,
        /// Selective outcome, `a=VALUE`.
        #[arg(long, allow_hyphen_values = true)]
        selective: Option<String>,
    },
    /// Export a channel kernel.
    Kernel {
        name: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<String>,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
        /// Remove the Kraus element with this index.
        #[arg(long)]
        drop_kraus: Option<usize>,
        /// Scale the Kraus element with this index by 0.9.
        #[arg(long)]
        scale_kraus: Option<usize>,
        /// Remove the outcomes within 0.5 of this value.
        #[arg(long, allow_hyphen_values = true)]
        drop_window: Option<f64>,
    },
}

fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("TOMO_THREADS") {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::usage(format!("TOMO_THREADS='{v}' is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<String> {
    init_threads()?;
    let c = cli.common;
    let flags = Flags {
        dim: c.dim,
        xmax: c.xmax,
        nx: c.nx,
        ntheta: c.ntheta,
        kmax: c.kmax,
        out: c.out,
        method: c.method,
        tol: c.tol,
        seed: c.seed,
    };
    match cli.command {
        Command::State { descriptor } => cmd_state(&descriptor, &flags),
        Command::Tomogram { descriptor, state, reconstruct } => cmd_tomogram(&descriptor, state.as_deref(), reconstruct, &flags),
        Command::Channel { name, params, state, input, selective } => cmd_channel(
            &ChannelArgs {
                name: &name,
                params: &params,
                state: state.as_deref(),
                input: input.as_deref(),
                selective: selective.as_deref(),
            },
            &flags,
        ),
        Command::Kernel { name, params } => cmd_kernel(&name, &params, &flags),
        Command::Verify { suite, args, drop_kraus, scale_kraus, drop_window } => {
            cmd_verify(&suite, &args, &VerifyOptions { drop_kraus, scale_kraus, drop_window }, &flags)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let first = e.to_string().lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
            let err = CliError::Usage(first);
            eprintln!("{}", err.line());
            return ExitCode::from(err.exit_status() as u8);
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(err) => {
            let _ = std::io::stdout().flush();
            eprintln!("{}", err.line());
            ExitCode::from(err.exit_status() as u8)
        }
    }
}
