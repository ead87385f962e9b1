// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::netlist::NetlistError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("undefined statistic: {0}")]
    UndefinedStatistic(String),
    #[error("operation requires the {expected} backend, got {found}")]
    BackendMismatch {
        expected: crate::Backend,
        found: crate::Backend,
    },
    #[error("reference signal is degenerate (empty spike train)")]
    DegenerateReference,
    #[error("signal contains a zero chip at index {0}; hyperspace elements are all-nonzero")]
    ZeroChip(usize),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_len(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::LengthMismatch { left, right })
    }
}
