// SPDX-License-Identifier: Apache-2.0

//! Signal types shared by both backends, plus generation and correlation
//! statistics.
//!
//! An [`RtwSignal`] is a sequence of integer chip amplitudes, one per clock
//! step. Reference waves only ever carry `±1`, and the squeezed logic value L
//! is the all-zero signal. Gate outputs computed from invalid inputs may hold
//! other small integers (for instance `±2` out of the inverter), so chips are
//! stored as `i32` rather than clamped.
//!
//! A [`SpikeTrain`] is a set of occupied, slot-aligned time slots, stored as a
//! packed bitset over a fixed horizon.

use std::fmt;

use rand::{Rng, RngExt};

use crate::error::{check_len, Error, Result};

/// Exact classification of a signal against the designated reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicClass {
    ValueH,
    ValueL,
    Invalid,
}

impl LogicClass {
    pub fn is_valid(self) -> bool {
        !matches!(self, LogicClass::Invalid)
    }

    pub fn from_bool(bit: bool) -> Self {
        if bit {
            LogicClass::ValueH
        } else {
            LogicClass::ValueL
        }
    }
}

impl fmt::Display for LogicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicClass::ValueH => "H",
            LogicClass::ValueL => "L",
            LogicClass::Invalid => "INVALID",
        })
    }
}

/// Behaviour common to RTW signals and spike trains.
pub trait LogicSignal: Clone + PartialEq + fmt::Debug + Send + Sync {
    /// Number of chips or slots.
    fn horizon(&self) -> usize;

    /// True for the squeezed L value: all chips zero, or no spikes.
    fn is_low(&self) -> bool;
}

/// Classify `x` against the reference `h` by exact comparison.
///
/// `ValueH` iff `x == h`, `ValueL` iff `x` carries no signal, `Invalid`
/// otherwise. A reference that is itself low cannot separate the two values
/// and is rejected.
pub fn classify<S: LogicSignal>(x: &S, h: &S) -> Result<LogicClass> {
    check_len(x.horizon(), h.horizon())?;
    if h.is_low() {
        return Err(Error::DegenerateReference);
    }
    Ok(if x == h {
        LogicClass::ValueH
    } else if x.is_low() {
        LogicClass::ValueL
    } else {
        LogicClass::Invalid
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RtwSignal {
    chips: Vec<i32>,
}

impl RtwSignal {
    pub fn from_chips(chips: Vec<i32>) -> Result<Self> {
        if chips.is_empty() {
            return Err(Error::InvalidArgument("RTW signal needs at least one chip".into()));
        }
        Ok(RtwSignal { chips })
    }

    pub fn chips(&self) -> &[i32] {
        &self.chips
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    /// Every chip is `+1` or `-1`.
    pub fn is_reference_like(&self) -> bool {
        self.chips.iter().all(|&c| c == 1 || c == -1)
    }

    pub fn first_zero(&self) -> Option<usize> {
        self.chips.iter().position(|&c| c == 0)
    }

    /// Chipwise product.
    pub fn mul(&self, other: &RtwSignal) -> Result<RtwSignal> {
        self.zip_with(other, |a, b| a.saturating_mul(b))
    }

    /// Chipwise `self - other`.
    pub fn sub(&self, other: &RtwSignal) -> Result<RtwSignal> {
        self.zip_with(other, |a, b| a.saturating_sub(b))
    }

    pub fn neg(&self) -> RtwSignal {
        RtwSignal {
            chips: self.chips.iter().map(|c| c.saturating_neg()).collect(),
        }
    }

    /// Copy of the signal with chip `index` negated.
    pub fn with_chip_negated(&self, index: usize) -> RtwSignal {
        let mut chips = self.chips.clone();
        chips[index] = chips[index].saturating_neg();
        RtwSignal { chips }
    }

    /// Number of `+1` chips.
    pub fn count_positive(&self) -> usize {
        self.chips.iter().filter(|&&c| c == 1).count()
    }

    fn zip_with(&self, other: &RtwSignal, f: impl Fn(i32, i32) -> i32) -> Result<RtwSignal> {
        check_len(self.len(), other.len())?;
        Ok(RtwSignal {
            chips: self.chips.iter().zip(&other.chips).map(|(&a, &b)| f(a, b)).collect(),
        })
    }
}

impl fmt::Debug for RtwSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 16;
        write!(f, "RtwSignal[{}](", self.len())?;
        for (i, c) in self.chips.iter().take(SHOWN).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c:+}")?;
        }
        if self.len() > SHOWN {
            f.write_str(",..")?;
        }
        f.write_str(")")
    }
}

impl LogicSignal for RtwSignal {
    fn horizon(&self) -> usize {
        self.len()
    }

    fn is_low(&self) -> bool {
        self.chips.iter().all(|&c| c == 0)
    }
}

/// Draw a reference RTW: each chip independently `+1` or `-1` with
/// probability 1/2, which is the same process as flipping the sign with
/// probability 1/2 at every step.
pub fn gen_rtw<R: Rng + ?Sized>(rng: &mut R, n_chips: usize) -> Result<RtwSignal> {
    if n_chips == 0 {
        return Err(Error::InvalidArgument("RTW length must be at least 1".into()));
    }
    let mut chips = Vec::with_capacity(n_chips);
    while chips.len() < n_chips {
        let word = rng.next_u64();
        let take = (n_chips - chips.len()).min(64);
        chips.extend((0..take).map(|bit| if (word >> bit) & 1 == 1 { 1 } else { -1 }));
    }
    Ok(RtwSignal { chips })
}

/// The squeezed L value: no signal on any chip.
pub fn zero_signal(n_chips: usize) -> Result<RtwSignal> {
    RtwSignal::from_chips(vec![0; n_chips])
}

/// Sliding boxcar mean of the chipwise product `x * y`, one value per full
/// window, so the output has `n - window + 1` entries.
pub fn cross_correlation(x: &RtwSignal, y: &RtwSignal, window: usize) -> Result<Vec<f64>> {
    Ok(window_sums(x, y, window)?
        .into_iter()
        .map(|s| s as f64 / window as f64)
        .collect())
}

/// Integer window sums of the chipwise product; the exact form behind
/// [`cross_correlation`].
pub(crate) fn window_sums(x: &RtwSignal, y: &RtwSignal, window: usize) -> Result<Vec<i64>> {
    check_len(x.len(), y.len())?;
    if window == 0 || window > x.len() {
        return Err(Error::InvalidArgument(format!(
            "window {window} outside 1..={}",
            x.len()
        )));
    }
    let products: Vec<i64> = x
        .chips
        .iter()
        .zip(&y.chips)
        .map(|(&a, &b)| i64::from(a) * i64::from(b))
        .collect();
    let mut sums = Vec::with_capacity(products.len() - window + 1);
    let mut acc: i64 = products[..window].iter().sum();
    sums.push(acc);
    for t in window..products.len() {
        acc += products[t] - products[t - window];
        sums.push(acc);
    }
    Ok(sums)
}

/// Set of occupied slots over a horizon of `n_slots`, packed 64 per word.
/// Bits at or beyond `n_slots` are always clear.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpikeTrain {
    words: Vec<u64>,
    n_slots: usize,
}

impl SpikeTrain {
    pub fn empty(n_slots: usize) -> Result<Self> {
        if n_slots == 0 {
            return Err(Error::InvalidArgument("spike horizon must be at least 1".into()));
        }
        Ok(SpikeTrain {
            words: vec![0; n_slots.div_ceil(64)],
            n_slots,
        })
    }

    pub fn from_slots(n_slots: usize, slots: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut train = SpikeTrain::empty(n_slots)?;
        for slot in slots {
            if slot >= n_slots {
                return Err(Error::InvalidArgument(format!(
                    "slot {slot} outside horizon {n_slots}"
                )));
            }
            train.set(slot);
        }
        Ok(train)
    }

    /// Every slot occupied.
    pub fn full(n_slots: usize) -> Result<Self> {
        let mut train = SpikeTrain::empty(n_slots)?;
        train.words.iter_mut().for_each(|w| *w = u64::MAX);
        train.clear_tail();
        Ok(train)
    }

    fn set(&mut self, slot: usize) {
        self.words[slot / 64] |= 1 << (slot % 64);
    }

    fn clear_tail(&mut self) {
        let rem = self.n_slots % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn contains(&self, slot: usize) -> bool {
        slot < self.n_slots && (self.words[slot / 64] >> (slot % 64)) & 1 == 1
    }

    /// Number of spikes.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn intersection(&self, other: &SpikeTrain) -> Result<SpikeTrain> {
        self.combine(other, |a, b| a & b)
    }

    /// Slots of `self` not in `other`.
    pub fn difference(&self, other: &SpikeTrain) -> Result<SpikeTrain> {
        self.combine(other, |a, b| a & !b)
    }

    pub fn union(&self, other: &SpikeTrain) -> Result<SpikeTrain> {
        self.combine(other, |a, b| a | b)
    }

    /// Copy of the train with membership of `slot` toggled.
    pub fn with_slot_toggled(&self, slot: usize) -> SpikeTrain {
        assert!(slot < self.n_slots, "slot {slot} outside horizon {}", self.n_slots);
        let mut out = self.clone();
        out.words[slot / 64] ^= 1 << (slot % 64);
        out
    }

    /// Spikes of `self` within slots `[start, end)`.
    pub fn count_in(&self, start: usize, end: usize) -> usize {
        (start..end.min(self.n_slots)).filter(|&s| self.contains(s)).count()
    }

    fn combine(&self, other: &SpikeTrain, f: impl Fn(u64, u64) -> u64) -> Result<SpikeTrain> {
        check_len(self.n_slots, other.n_slots)?;
        Ok(SpikeTrain {
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
            n_slots: self.n_slots,
        })
    }

    pub(crate) fn from_words(words: Vec<u64>, n_slots: usize) -> SpikeTrain {
        debug_assert_eq!(words.len(), n_slots.div_ceil(64));
        let mut train = SpikeTrain { words, n_slots };
        train.clear_tail();
        train
    }
}

impl fmt::Debug for SpikeTrain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 16;
        write!(f, "SpikeTrain[{}]{{", self.n_slots)?;
        for (i, s) in self.slots().take(SHOWN).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        if self.count() > SHOWN {
            f.write_str(",..")?;
        }
        f.write_str("}")
    }
}

impl LogicSignal for SpikeTrain {
    fn horizon(&self) -> usize {
        self.n_slots
    }

    fn is_low(&self) -> bool {
        self.is_empty()
    }
}

/// Draw `m` pairwise-disjoint spike trains from `rng`.
///
/// Each slot independently takes one outcome: silent with probability
/// `1 - m*s`, or train `i` fires with probability `s` for each `i`.
pub fn gen_disjoint_spike_trains_with<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n_slots: usize,
    density: f64,
) -> Result<Vec<SpikeTrain>> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one spike train".into()));
    }
    if !(0.0..=1.0).contains(&density) || m as f64 * density > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "firing probability {density} with {m} trains exceeds one spike per slot"
        )));
    }
    if n_slots == 0 {
        return Err(Error::InvalidArgument("spike horizon must be at least 1".into()));
    }
    let mut words = vec![vec![0u64; n_slots.div_ceil(64)]; m];
    let occupied = m as f64 * density;
    for slot in 0..n_slots {
        let u: f64 = rng.random();
        if u < occupied {
            let which = ((u / density) as usize).min(m - 1);
            words[which][slot / 64] |= 1 << (slot % 64);
        }
    }
    Ok(words
        .into_iter()
        .map(|w| SpikeTrain::from_words(w, n_slots))
        .collect())
}

/// Seeded form of [`gen_disjoint_spike_trains_with`], drawing from the
/// spike-family stream of `master_seed`.
pub fn gen_disjoint_spike_trains(
    master_seed: u64,
    m: usize,
    n_slots: usize,
    density: f64,
) -> Result<Vec<SpikeTrain>> {
    let mut rng = crate::seed::stream(master_seed, crate::seed::StreamPurpose::SpikeFamily, 0);
    gen_disjoint_spike_trains_with(&mut rng, m, n_slots, density)
}

/// Which train of a pair normalizes a coincidence count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalizer {
    First,
    Second,
}

/// `|a ∩ b| / |reference|`.
pub fn coincidence_fraction(a: &SpikeTrain, b: &SpikeTrain, reference: Normalizer) -> Result<f64> {
    let both = a.intersection(b)?.count();
    let denom = match reference {
        Normalizer::First => a.count(),
        Normalizer::Second => b.count(),
    };
    if denom == 0 {
        return Err(Error::UndefinedStatistic(
            "coincidence fraction against an empty reference train".into(),
        ));
    }
    Ok(both as f64 / denom as f64)
}
