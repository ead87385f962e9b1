// SPDX-License-Identifier: Apache-2.0

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::Args;
use nbl_core::netlist::{evaluate_with, lower_circuit, parse_assignment, parse_netlist, truth_table, Circuit, Evaluation};
use nbl_core::{Backend, GateAlgebra, LogicClass, ReferenceSystem, References, RtwAlgebra, SpikeAlgebra};

use crate::usage;

pub const DEFAULT_CHIPS: usize = 1024;
pub const DEFAULT_DENSITY: f64 = 0.1;

#[derive(Args)]
pub struct EvalArgs {
    #[arg(long)]
    netlist: PathBuf,
    /// Input values, e.g. `a=1,b=0`
    #[arg(long, conflicts_with = "truth_table")]
    assign: Option<String>,
    /// Evaluate every input combination
    #[arg(long)]
    truth_table: bool,
    #[arg(long, default_value = "rtw")]
    backend: Backend,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reference length (chips or slots)
    #[arg(long, default_value_t = DEFAULT_CHIPS)]
    chips: usize,
    /// Spike density of the reference train (spike backend only)
    #[arg(long)]
    density: Option<f64>,
    /// Lower to {NOT, AND}, print the lowered netlist, and evaluate that
    #[arg(long)]
    lower: bool,
    /// Write every wire's signal to this CSV (with --assign)
    #[arg(long, requires = "assign")]
    trace: Option<PathBuf>,
}

pub fn load_circuit(path: &Path) -> anyhow::Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_netlist(&text).with_context(|| format!("{}", path.display()))
}

pub fn reference_system(backend: Backend, seed: u64, chips: usize, density: Option<f64>) -> anyhow::Result<ReferenceSystem> {
    match backend {
        Backend::Rtw => {
            if density.is_some() {
                return usage("--density applies to the spike backend only");
            }
            Ok(ReferenceSystem::rtw(seed, 1, chips)?)
        }
        Backend::Spike => Ok(ReferenceSystem::spike(seed, 1, chips, density.unwrap_or(DEFAULT_DENSITY))?),
    }
}

fn show(class: LogicClass) -> &'static str {
    match class {
        LogicClass::ValueH => "H",
        LogicClass::ValueL => "L",
        LogicClass::Invalid => "INVALID",
    }
}

fn write_trace<A: GateAlgebra>(path: &Path, eval: &Evaluation<A::Signal>, horizon: usize, chip: impl Fn(&A::Signal, usize) -> String) -> anyhow::Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let mut header = vec!["chip".to_string()];
    header.extend(eval.wires.iter().map(|(name, _)| name.clone()));
    w.write_record(&header)?;
    for t in 0..horizon {
        let mut row = vec![t.to_string()];
        row.extend(eval.wires.iter().map(|(_, s)| chip(s, t)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: &EvalArgs) -> anyhow::Result<ExitCode> {
    if args.assign.is_none() && !args.truth_table && !args.lower {
        return usage("eval needs --assign, --truth-table or --lower");
    }
    let mut circuit = load_circuit(&args.netlist)?;
    let sys = reference_system(args.backend, args.seed, args.chips, args.density)?;
    let mut out = io::stdout().lock();
    if args.lower {
        circuit = lower_circuit(&circuit);
        write!(out, "{circuit}")?;
    }

    let mut all_valid = true;
    if args.truth_table {
        let table = truth_table(&circuit, &sys)?;
        writeln!(out, "{} | {}", table.input_names.join(" "), table.output_names.join(" "))?;
        for row in &table.rows {
            let ins: Vec<&str> = row.inputs.iter().map(|&b| if b { "1" } else { "0" }).collect();
            let outs: Vec<&str> = row.outputs.iter().map(|&c| show(c)).collect();
            all_valid &= row.outputs.iter().all(|c| c.is_valid());
            writeln!(out, "{} | {}", ins.join(" "), outs.join(" "))?;
        }
    } else if let Some(text) = &args.assign {
        let assignment = parse_assignment(text)?;
        let outputs = match sys.references() {
            References::Rtw(refs) => {
                let e = evaluate_with(&circuit, &assignment, &RtwAlgebra::new(refs[0].clone()))?;
                if let Some(path) = &args.trace {
                    write_trace::<RtwAlgebra>(path, &e, sys.horizon(), |s, t| s.chips()[t].to_string())?;
                }
                e.outputs
            }
            References::Spike(refs) => {
                if refs[0].is_empty() {
                    return Err(nbl_core::Error::DegenerateReference.into());
                }
                let e = evaluate_with(&circuit, &assignment, &SpikeAlgebra::new(refs[0].clone()))?;
                if let Some(path) = &args.trace {
                    write_trace::<SpikeAlgebra>(path, &e, sys.horizon(), |s, t| u8::from(s.contains(t)).to_string())?;
                }
                e.outputs
            }
        };
        all_valid = outputs.iter().all(|(_, c)| c.is_valid());
        let line: Vec<String> = outputs.iter().map(|(w, c)| format!("{w}={}", show(*c))).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()?;
    Ok(if all_valid { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
