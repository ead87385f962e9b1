// SPDX-License-Identifier: Apache-2.0

use std::fs::OpenOptions;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Subcommand, ValueEnum};
use nbl_core::experiment::{measure_error_propagation, measure_misclassification, window_report, ExperimentSetup};
use nbl_core::follower::{ErrorModel, FollowerConfig, DEFAULT_THRESHOLD};
use nbl_core::netlist::{parse_assignment, Assignment};
use nbl_core::report::write_csv;
use nbl_core::{Backend, ExperimentReport};

use crate::eval::{load_circuit, reference_system, DEFAULT_CHIPS, DEFAULT_DENSITY};
use crate::usage;

#[derive(Subcommand)]
pub enum ExperimentCmd {
    /// Follower miss / false-alarm rates against the binomial oracle
    Misclassify(MisclassifyArgs),
    /// Single fast-error propagation through a netlist
    Propagation(PropagationArgs),
    /// Smallest window meeting a target error probability
    Window(WindowArgs),
}

#[derive(Args)]
pub struct Output {
    /// Append rows to this CSV (header written only when the file is new or
    /// empty); stdout otherwise
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    Boxcar,
    Exponential,
}

#[derive(Args)]
pub struct MisclassifyArgs {
    /// Boxcar window in chips
    #[arg(long = "W", default_value_t = 16)]
    window: usize,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    theta: f64,
    #[arg(long, default_value_t = 0.0)]
    p_fast: f64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "rtw")]
    backend: Backend,
    #[arg(long)]
    density: Option<f64>,
    #[arg(long, value_enum, default_value = "boxcar")]
    mode: Mode,
    /// Smoothing factor for --mode exponential
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
pub struct PropagationArgs {
    #[arg(long)]
    netlist: PathBuf,
    /// Input values; every input is 1 when absent
    #[arg(long)]
    assign: Option<String>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "rtw")]
    backend: Backend,
    #[arg(long, default_value_t = DEFAULT_CHIPS)]
    chips: usize,
    #[arg(long)]
    density: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
pub struct WindowArgs {
    #[arg(long)]
    target: f64,
    #[arg(long, default_value_t = 0.0)]
    p_fast: f64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    theta: f64,
    #[command(flatten)]
    output: Output,
}

fn emit(output: &Output, rows: &[ExperimentReport]) -> anyhow::Result<()> {
    match &output.csv {
        Some(path) => {
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .with_context(|| format!("opening {}", path.display()))?;
            let header = file.metadata()?.len() == 0;
            let mut w = BufWriter::new(file);
            write_csv(&mut w, rows, header)?;
            w.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            write_csv(&mut out, rows, true)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn misclassify(args: &MisclassifyArgs) -> anyhow::Result<Vec<ExperimentReport>> {
    let cfg = match (args.mode, args.alpha) {
        (Mode::Boxcar, None) => FollowerConfig::boxcar(args.window, args.theta)?,
        (Mode::Boxcar, Some(_)) => return usage("--alpha needs --mode exponential"),
        (Mode::Exponential, Some(alpha)) => FollowerConfig::exponential(alpha, args.theta)?,
        (Mode::Exponential, None) => return usage("--mode exponential needs --alpha"),
    };
    let setup = match args.backend {
        Backend::Rtw => {
            if args.density.is_some() {
                return usage("--density applies to the spike backend only");
            }
            ExperimentSetup::rtw(args.seed)
        }
        Backend::Spike => ExperimentSetup::spike(args.seed, args.density.unwrap_or(DEFAULT_DENSITY)),
    };
    let em = ErrorModel::new(args.p_fast)?;
    Ok(measure_misclassification(&setup, &cfg, &em, args.trials)?.rows())
}

fn propagation(args: &PropagationArgs) -> anyhow::Result<Vec<ExperimentReport>> {
    let circuit = load_circuit(&args.netlist)?;
    let assignment = match &args.assign {
        Some(text) => parse_assignment(text)?,
        None => Assignment::from_bits(&circuit, &vec![true; circuit.inputs().len()]),
    };
    let sys = reference_system(args.backend, args.seed, args.chips, args.density)?;
    let r = measure_error_propagation(&circuit, &assignment, &sys, args.trials, args.seed)?;
    Ok(vec![r.report])
}

pub fn run(cmd: &ExperimentCmd) -> anyhow::Result<ExitCode> {
    let (rows, output) = match cmd {
        ExperimentCmd::Misclassify(args) => (misclassify(args)?, &args.output),
        ExperimentCmd::Propagation(args) => (propagation(args)?, &args.output),
        ExperimentCmd::Window(args) => (vec![window_report(args.p_fast, args.theta, args.target)?], &args.output),
    };
    emit(output, &rows)?;
    Ok(ExitCode::SUCCESS)
}
