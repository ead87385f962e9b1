// SPDX-License-Identifier: Apache-2.0

//! Seeded families of mutually orthogonal reference signals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{stream, StreamPurpose};
use crate::signal::{gen_disjoint_spike_trains, gen_rtw, RtwSignal, SpikeTrain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rtw,
    Spike,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Rtw => "rtw",
            Backend::Spike => "spike",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rtw" => Ok(Backend::Rtw),
            "spike" => Ok(Backend::Spike),
            other => Err(Error::InvalidArgument(format!("unknown backend `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum References {
    Rtw(Vec<RtwSignal>),
    Spike(Vec<SpikeTrain>),
}

/// An ordered family `H_1..H_m` of orthogonal references plus the
/// parameters that regenerate it exactly.
///
/// RTW references are independent waves, reference `i` drawn from its own
/// stream `(master_seed, i)`. Spike references are pairwise disjoint trains
/// drawn jointly, one categorical outcome per slot. The shared squeezed L is
/// the zero signal / empty train and is not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSystem {
    master_seed: u64,
    horizon: usize,
    density: Option<f64>,
    refs: References,
}

impl ReferenceSystem {
    pub fn rtw(master_seed: u64, m: usize, n_chips: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("need at least one reference".into()));
        }
        let refs = (0..m)
            .map(|i| gen_rtw(&mut stream(master_seed, StreamPurpose::Reference, i as u64), n_chips))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReferenceSystem {
            master_seed,
            horizon: n_chips,
            density: None,
            refs: References::Rtw(refs),
        })
    }

    pub fn spike(master_seed: u64, m: usize, n_slots: usize, density: f64) -> Result<Self> {
        let refs = gen_disjoint_spike_trains(master_seed, m, n_slots, density)?;
        Ok(ReferenceSystem {
            master_seed,
            horizon: n_slots,
            density: Some(density),
            refs: References::Spike(refs),
        })
    }

    /// Build a system for either backend. `density` is required for spikes
    /// and rejected for RTW.
    pub fn generate(
        backend: Backend,
        master_seed: u64,
        m: usize,
        horizon: usize,
        density: Option<f64>,
    ) -> Result<Self> {
        match (backend, density) {
            (Backend::Rtw, None) => Self::rtw(master_seed, m, horizon),
            (Backend::Spike, Some(s)) => Self::spike(master_seed, m, horizon, s),
            (Backend::Rtw, Some(_)) => Err(Error::InvalidArgument(
                "spike density does not apply to the rtw backend".into(),
            )),
            (Backend::Spike, None) => Err(Error::InvalidArgument(
                "the spike backend needs a firing density".into(),
            )),
        }
    }

    pub fn backend(&self) -> Backend {
        match self.refs {
            References::Rtw(_) => Backend::Rtw,
            References::Spike(_) => Backend::Spike,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn density(&self) -> Option<f64> {
        self.density
    }

    pub fn len(&self) -> usize {
        match &self.refs {
            References::Rtw(r) => r.len(),
            References::Spike(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn references(&self) -> &References {
        &self.refs
    }

    pub fn rtw_refs(&self) -> Result<&[RtwSignal]> {
        match &self.refs {
            References::Rtw(r) => Ok(r),
            References::Spike(_) => Err(Error::BackendMismatch {
                expected: Backend::Rtw,
                found: Backend::Spike,
            }),
        }
    }

    pub fn spike_refs(&self) -> Result<&[SpikeTrain]> {
        match &self.refs {
            References::Spike(r) => Ok(r),
            References::Rtw(_) => Err(Error::BackendMismatch {
                expected: Backend::Spike,
                found: Backend::Rtw,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{classify, LogicClass};

    #[test]
    fn regeneration_is_identical() {
        let a = ReferenceSystem::rtw(11, 3, 500).unwrap();
        assert_eq!(a, ReferenceSystem::rtw(11, 3, 500).unwrap());
        assert_ne!(a, ReferenceSystem::rtw(12, 3, 500).unwrap());
        let s = ReferenceSystem::spike(11, 3, 500, 0.2).unwrap();
        assert_eq!(s, ReferenceSystem::spike(11, 3, 500, 0.2).unwrap());
    }

    #[test]
    fn rtw_reference_streams_are_per_index() {
        // Reference i depends only on (seed, i), not on how many siblings exist.
        let small = ReferenceSystem::rtw(5, 2, 64).unwrap();
        let big = ReferenceSystem::rtw(5, 4, 64).unwrap();
        assert_eq!(small.rtw_refs().unwrap(), &big.rtw_refs().unwrap()[..2]);
    }

    #[test]
    fn references_classify_as_high() {
        let sys = ReferenceSystem::rtw(1, 4, 256).unwrap();
        for h in sys.rtw_refs().unwrap() {
            assert_eq!(classify(h, h).unwrap(), LogicClass::ValueH);
        }
        let sys = ReferenceSystem::spike(1, 4, 256, 0.2).unwrap();
        for h in sys.spike_refs().unwrap() {
            assert_eq!(classify(h, h).unwrap(), LogicClass::ValueH);
        }
    }

    #[test]
    fn backend_accessors_and_parameters() {
        let sys = ReferenceSystem::rtw(1, 1, 8).unwrap();
        assert!(sys.spike_refs().is_err());
        assert_eq!(sys.backend(), Backend::Rtw);
        assert!(ReferenceSystem::generate(Backend::Rtw, 1, 1, 8, Some(0.1)).is_err());
        assert!(ReferenceSystem::generate(Backend::Spike, 1, 1, 8, None).is_err());
        assert_eq!("spike".parse::<Backend>().unwrap(), Backend::Spike);
        assert!("SPIKE".parse::<Backend>().is_err());
    }
}
