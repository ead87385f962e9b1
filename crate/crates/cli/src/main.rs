// SPDX-License-Identifier: Apache-2.0

//! `nbl`: reference generation, netlist evaluation and follower experiments.
//!
//! Exit codes: 0 success, 1 runtime failure (or an INVALID output from
//! `eval`), 2 usage, parse or infeasibility errors.

mod eval;
mod experiment;
mod gen;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nbl_core::netlist::NetlistError;

#[derive(Parser)]
#[command(name = "nbl", version, about = "Noise-based logic simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a reference system and write it as CSV
    Gen(gen::GenArgs),
    /// Evaluate a netlist on one assignment or its full truth table
    Eval(eval::EvalArgs),
    /// Run a follower experiment and emit CSV report rows
    #[command(subcommand)]
    Experiment(experiment::ExperimentCmd),
}

/// Bad flag combination; reported with exit code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(Usage(msg.into()).into())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Usage>() || cause.is::<NetlistError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<nbl_core::Error>() {
            return match e {
                nbl_core::Error::InvalidArgument(_)
                | nbl_core::Error::Infeasible(_)
                | nbl_core::Error::BackendMismatch { .. }
                | nbl_core::Error::Netlist(_) => 2,
                _ => 1,
            };
        }
    }
    1
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("NBL_THREADS") else {
        return Ok(());
    };
    let n: usize = match value.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return usage(format!("NBL_THREADS must be a positive integer, got `{value}`")),
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Gen(args) => gen::run(&args),
        Command::Eval(args) => eval::run(&args),
        Command::Experiment(cmd) => experiment::run(&cmd),
    });
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
