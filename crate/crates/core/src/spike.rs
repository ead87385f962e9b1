// SPDX-License-Identifier: Apache-2.0

//! Spike-train gates built from the orthon.
//!
//! The orthon is a pair of delay-free neurons with an excitatory and an
//! inhibitory input. Fed trains `A` and `B` it emits `A ∩ B` and `A ∩ ¬B`.
//! Logic H is a reference train, logic L the empty train; NOT is
//! `H ∩ ¬X` and AND is `X1 ∩ X2`. Superpositions are unions of disjoint
//! references.

use std::collections::BTreeSet;

use crate::error::{check_len, Error, Result};
use crate::gate::{GateAlgebra, GateKind};
use crate::reference::ReferenceSystem;
use crate::signal::SpikeTrain;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthonOutput {
    /// `A ∩ B`
    pub and_out: SpikeTrain,
    /// `A ∩ ¬B`
    pub diff_out: SpikeTrain,
}

/// Slot-aligned orthon: spikes of `a` pass to `diff_out` unless `b` fires in
/// the same slot, in which case they pass to `and_out`.
pub fn orthon(a: &SpikeTrain, b: &SpikeTrain) -> Result<OrthonOutput> {
    Ok(OrthonOutput {
        and_out: a.intersection(b)?,
        diff_out: a.difference(b)?,
    })
}

pub fn spike_not(x: &SpikeTrain, h: &SpikeTrain) -> Result<SpikeTrain> {
    Ok(orthon(h, x)?.diff_out)
}

pub fn spike_and(x1: &SpikeTrain, x2: &SpikeTrain) -> Result<SpikeTrain> {
    Ok(orthon(x1, x2)?.and_out)
}

pub fn spike_derived_gate(
    kind: GateKind,
    x1: &SpikeTrain,
    x2: &SpikeTrain,
    h: &SpikeTrain,
) -> Result<SpikeTrain> {
    if kind.arity() != 2 {
        return Err(Error::InvalidArgument(format!("{kind} is not a two-input gate")));
    }
    check_len(x1.n_slots(), h.n_slots())?;
    SpikeAlgebra::new(h.clone()).gate(kind, &[x1, x2])
}

/// Union of same-horizon trains.
pub fn superpose(trains: &[SpikeTrain]) -> Result<SpikeTrain> {
    let (first, rest) = trains
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("nothing to superpose".into()))?;
    rest.iter().try_fold(first.clone(), |acc, t| acc.union(t))
}

/// `S ∩ ¬H_k` via the orthon's difference output.
pub fn remove_component(s: &SpikeTrain, h_k: &SpikeTrain) -> Result<SpikeTrain> {
    Ok(orthon(s, h_k)?.diff_out)
}

/// Indices of references that overlap `s`. Exact for unions of references
/// from a disjoint family.
pub fn decompose(s: &SpikeTrain, sys: &ReferenceSystem) -> Result<BTreeSet<usize>> {
    let refs = sys.spike_refs()?;
    let mut found = BTreeSet::new();
    for (i, h) in refs.iter().enumerate() {
        if !s.intersection(h)?.is_empty() {
            found.insert(i);
        }
    }
    Ok(found)
}

/// Spike gate set over a shared reference train.
#[derive(Debug, Clone)]
pub struct SpikeAlgebra {
    h: SpikeTrain,
    empty: SpikeTrain,
}

impl SpikeAlgebra {
    pub fn new(h: SpikeTrain) -> Self {
        let empty = SpikeTrain::empty(h.n_slots()).expect("reference horizon is non-zero");
        SpikeAlgebra { h, empty }
    }
}

impl GateAlgebra for SpikeAlgebra {
    type Signal = SpikeTrain;

    fn reference(&self) -> &SpikeTrain {
        &self.h
    }

    fn low(&self) -> SpikeTrain {
        self.empty.clone()
    }

    fn not(&self, x: &SpikeTrain) -> Result<SpikeTrain> {
        spike_not(x, &self.h)
    }

    fn and(&self, x1: &SpikeTrain, x2: &SpikeTrain) -> Result<SpikeTrain> {
        spike_and(x1, x2)
    }
}
