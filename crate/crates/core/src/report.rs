// SPDX-License-Identifier: Apache-2.0

use std::io;

use serde::Serialize;

use crate::error::Result;
use crate::reference::Backend;

/// Column order of the experiment CSV.
pub const CSV_HEADER: &str = "experiment,backend,seed,trials,W,theta,p_fast,measured,oracle,stderr,wall_ms";

/// One measured (or computed) rate with the parameters that produced it.
/// Fields that do not apply to an experiment are left empty in CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub backend: Backend,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    #[serde(rename = "W")]
    pub window: Option<usize>,
    pub theta: Option<f64>,
    pub p_fast: Option<f64>,
    pub measured: f64,
    pub oracle: Option<f64>,
    pub stderr: Option<f64>,
    pub wall_ms: u64,
    /// Number of trials counted as events (errors, propagations).
    #[serde(skip)]
    pub events: u64,
    /// Spike-mode trials whose final window held no reference spike. They
    /// are counted as errors.
    #[serde(skip)]
    pub undecidable: u64,
}

impl ExperimentReport {
    /// Binomial standard error of the oracle rate over this report's trials.
    pub fn oracle_sigma(&self) -> Option<f64> {
        let q = self.oracle?;
        let n = self.trials? as f64;
        Some((q * (1.0 - q) / n).sqrt())
    }

    /// `|measured - oracle| <= k * sigma(oracle)`. `None` without an oracle.
    pub fn within_sigmas(&self, k: f64) -> Option<bool> {
        let q = self.oracle?;
        let sigma = self.oracle_sigma()?;
        Some((self.measured - q).abs() <= k * sigma)
    }
}

/// Write reports as CSV rows, optionally preceded by the header line.
pub fn write_csv<W: io::Write>(out: W, reports: &[ExperimentReport], header: bool) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(header).from_writer(out);
    for report in reports {
        writer.serialize(report)?;
    }
    writer.flush()?;
    Ok(())
}
