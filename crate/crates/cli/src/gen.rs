// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Args;
use nbl_core::signal::cross_correlation;
use nbl_core::{Backend, ReferenceSystem, References};

use crate::usage;

#[derive(Args)]
pub struct GenArgs {
    #[arg(long, default_value = "rtw")]
    backend: Backend,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of references
    #[arg(long, default_value_t = 2)]
    refs: usize,
    /// RTW length in chips
    #[arg(long)]
    chips: Option<usize>,
    /// Spike train length in slots
    #[arg(long)]
    slots: Option<usize>,
    /// Per-slot spike probability of each train
    #[arg(long)]
    density: Option<f64>,
    /// CSV destination; stdout when absent (the summary then goes to stderr)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn system(args: &GenArgs) -> anyhow::Result<ReferenceSystem> {
    let sys = match args.backend {
        Backend::Rtw => {
            if args.density.is_some() || args.slots.is_some() {
                return usage("--density and --slots apply to the spike backend only");
            }
            let Some(n) = args.chips else {
                return usage("rtw generation needs --chips");
            };
            ReferenceSystem::rtw(args.seed, args.refs, n)?
        }
        Backend::Spike => {
            if args.chips.is_some() {
                return usage("--chips applies to the rtw backend; use --slots");
            }
            let (Some(n), Some(s)) = (args.slots, args.density) else {
                return usage("spike generation needs --slots and --density");
            };
            ReferenceSystem::spike(args.seed, args.refs, n, s)?
        }
    };
    Ok(sys)
}

fn write_signals<W: Write>(sys: &ReferenceSystem, out: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let index = match sys.backend() {
        Backend::Rtw => "chip",
        Backend::Spike => "slot",
    };
    let mut header = vec![index.to_string()];
    header.extend((1..=sys.len()).map(|i| format!("h{i}")));
    w.write_record(&header)?;
    let mut row = Vec::with_capacity(sys.len() + 1);
    for t in 0..sys.horizon() {
        row.clear();
        row.push(t.to_string());
        match sys.references() {
            References::Rtw(refs) => row.extend(refs.iter().map(|r| r.chips()[t].to_string())),
            References::Spike(refs) => row.extend(refs.iter().map(|r| u8::from(r.contains(t)).to_string())),
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn summary<W: Write>(sys: &ReferenceSystem, mut out: W) -> anyhow::Result<()> {
    writeln!(out, "backend={} seed={} refs={} horizon={}", sys.backend(), sys.master_seed(), sys.len(), sys.horizon())?;
    match sys.references() {
        References::Rtw(refs) => {
            for i in 0..refs.len() {
                for j in i + 1..refs.len() {
                    let c = cross_correlation(&refs[i], &refs[j], sys.horizon())?[0];
                    writeln!(out, "corr h{} h{} = {c:.6}", i + 1, j + 1)?;
                }
            }
        }
        References::Spike(refs) => {
            for (i, r) in refs.iter().enumerate() {
                writeln!(out, "spikes h{} = {}", i + 1, r.count())?;
            }
            for i in 0..refs.len() {
                for j in i + 1..refs.len() {
                    let k = refs[i].intersection(&refs[j])?.count();
                    writeln!(out, "intersection h{} h{} = {k}", i + 1, j + 1)?;
                }
            }
        }
    }
    Ok(())
}

pub fn run(args: &GenArgs) -> anyhow::Result<ExitCode> {
    let sys = system(args)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_signals(&sys, io::BufWriter::new(file))?;
            summary(&sys, io::stdout().lock())?;
        }
        None => {
            write_signals(&sys, io::stdout().lock())?;
            summary(&sys, io::stderr().lock())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
