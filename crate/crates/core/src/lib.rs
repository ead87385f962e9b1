// SPDX-License-Identifier: Apache-2.0

//! Instantaneous noise-based logic.
//!
//! Logic values are carried by noise: logic H of a bit is a reference noise
//! `H(t)` and logic L is "no signal". Two gate families are provided, both
//! universal and both free of time averaging:
//!
//! * [`rtw`]: random telegraph waves (chips `±1`), with `NOT X = H - X` and
//!   `X1 AND X2 = X1 * X2 * H`, plus the multiplicative hyperspace of
//!   reference products.
//! * [`spike`]: disjoint spike trains combined by the orthon, with
//!   `NOT X = H ∩ ¬X` and `X1 AND X2 = X1 ∩ X2`, plus union superpositions.
//!
//! [`netlist`] parses small gate-level circuits, lowers them to {NOT, AND}
//! and evaluates them over either backend. [`follower`] models the slow
//! correlator/threshold interface that turns a noise logic value into a DC
//! bit and removes fast errors, and [`experiment`] measures its error rates
//! against exact binomial tails.

pub mod binomial;
pub mod error;
pub mod experiment;
pub mod follower;
pub mod gate;
pub mod netlist;
pub mod reference;
pub mod report;
pub mod rtw;
pub mod seed;
pub mod signal;
pub mod spike;

pub use error::{Error, Result};
pub use gate::{GateAlgebra, GateKind};
pub use reference::{Backend, ReferenceSystem, References};
pub use report::ExperimentReport;

pub use rtw::{HyperIndexSet, RtwAlgebra};
pub use signal::{classify, LogicClass, LogicSignal, RtwSignal, SpikeTrain};
pub use spike::SpikeAlgebra;
