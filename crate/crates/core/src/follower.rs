// SPDX-License-Identifier: Apache-2.0

//! The slow FOLLOWER interface and fast-error injection.
//!
//! The follower correlates the incoming noise logic value with the reference,
//! smooths the product over time, and thresholds the result into a DC bit.
//! The analog RC integrator is modelled either as a boxcar over the last `W`
//! chips or as an exponential moving average with factor `alpha`. The
//! decision rule is `H iff mean >= threshold`, ties going to H.

use rand::{Rng, RngExt};

use crate::error::{check_len, Error, Result};
use crate::signal::{window_sums, RtwSignal, SpikeTrain};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothing {
    Boxcar { window: usize },
    Exponential { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FollowerConfig {
    smoothing: Smoothing,
    threshold: f64,
}

pub const DEFAULT_THRESHOLD: f64 = 0.5;

impl FollowerConfig {
    pub fn boxcar(window: usize, threshold: f64) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidArgument("follower window must be at least 1".into()));
        }
        Self::checked(Smoothing::Boxcar { window }, threshold)
    }

    pub fn exponential(alpha: f64, threshold: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("smoothing factor {alpha} outside (0, 1]")));
        }
        Self::checked(Smoothing::Exponential { alpha }, threshold)
    }

    fn checked(smoothing: Smoothing, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::InvalidArgument(format!("threshold {threshold} outside (0, 1)")));
        }
        Ok(FollowerConfig { smoothing, threshold })
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Chips needed for one settled decision: `W` for the boxcar, four time
    /// constants (`ceil(4 / alpha)`) for the exponential average.
    pub fn span(&self) -> usize {
        match self.smoothing {
            Smoothing::Boxcar { window } => window,
            Smoothing::Exponential { alpha } => (4.0 / alpha).ceil() as usize,
        }
    }
}

/// Threshold rule on an integer correlation sum over `window` chips.
pub fn decides_high(sum: i64, window: usize, threshold: f64) -> bool {
    sum as f64 >= threshold * window as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    High,
    Low,
    /// Spike mode only: no reference spike fell inside the window.
    Undecidable,
}

impl Decision {
    pub fn as_bit(self) -> Option<bool> {
        match self {
            Decision::High => Some(true),
            Decision::Low => Some(false),
            Decision::Undecidable => None,
        }
    }

    fn from_bit(bit: bool) -> Self {
        if bit {
            Decision::High
        } else {
            Decision::Low
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FollowerOutput {
    /// One decision per full boxcar window, or per chip for the exponential
    /// average.
    pub trace: Vec<Decision>,
    pub final_bit: Decision,
}

impl FollowerOutput {
    fn from_trace(trace: Vec<Decision>) -> Self {
        let final_bit = *trace.last().expect("trace is non-empty");
        FollowerOutput { trace, final_bit }
    }
}

fn check_span(horizon: usize, cfg: &FollowerConfig) -> Result<()> {
    if let Smoothing::Boxcar { window } = cfg.smoothing {
        if horizon < window {
            return Err(Error::InvalidArgument(format!(
                "horizon {horizon} shorter than follower window {window}"
            )));
        }
    }
    Ok(())
}

/// Follower on an RTW input: correlate `x` with `h`, smooth, threshold.
pub fn follower_rtw(x: &RtwSignal, h: &RtwSignal, cfg: &FollowerConfig) -> Result<FollowerOutput> {
    check_len(x.len(), h.len())?;
    check_span(x.len(), cfg)?;
    let trace = match cfg.smoothing {
        Smoothing::Boxcar { window } => window_sums(x, h, window)?
            .into_iter()
            .map(|s| Decision::from_bit(decides_high(s, window, cfg.threshold)))
            .collect(),
        Smoothing::Exponential { alpha } => {
            let mut mean = 0.0;
            x.chips()
                .iter()
                .zip(h.chips())
                .map(|(&a, &b)| {
                    mean += alpha * (f64::from(a) * f64::from(b) - mean);
                    Decision::from_bit(mean >= cfg.threshold)
                })
                .collect()
        }
    };
    Ok(FollowerOutput::from_trace(trace))
}

/// Follower on a spike input: the fraction of reference spikes in the window
/// that coincide with spikes of `x`.
pub fn follower_spike(x: &SpikeTrain, h: &SpikeTrain, cfg: &FollowerConfig) -> Result<FollowerOutput> {
    check_len(x.n_slots(), h.n_slots())?;
    check_span(x.n_slots(), cfg)?;
    let n = h.n_slots();
    let hits: Vec<u32> = (0..n).map(|t| u32::from(h.contains(t) && x.contains(t))).collect();
    let refs: Vec<u32> = (0..n).map(|t| u32::from(h.contains(t))).collect();
    let decide = |hit: f64, reference: f64| {
        if reference <= 0.0 {
            Decision::Undecidable
        } else {
            Decision::from_bit(hit >= cfg.threshold * reference)
        }
    };
    let trace = match cfg.smoothing {
        Smoothing::Boxcar { window } => {
            let mut hit: u64 = hits[..window].iter().map(|&v| u64::from(v)).sum();
            let mut reference: u64 = refs[..window].iter().map(|&v| u64::from(v)).sum();
            let mut trace = Vec::with_capacity(n - window + 1);
            trace.push(decide(hit as f64, reference as f64));
            for t in window..n {
                hit = hit + u64::from(hits[t]) - u64::from(hits[t - window]);
                reference = reference + u64::from(refs[t]) - u64::from(refs[t - window]);
                trace.push(decide(hit as f64, reference as f64));
            }
            trace
        }
        Smoothing::Exponential { alpha } => {
            let (mut hit, mut reference) = (0.0, 0.0);
            (0..n)
                .map(|t| {
                    hit += alpha * (f64::from(hits[t]) - hit);
                    reference += alpha * (f64::from(refs[t]) - reference);
                    decide(hit, reference)
                })
                .collect()
        }
    };
    Ok(FollowerOutput::from_trace(trace))
}

/// Independent per-chip (or per-slot) fast-error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    p_fast: f64,
}

impl ErrorModel {
    pub fn new(p_fast: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_fast) {
            return Err(Error::InvalidArgument(format!("p_fast {p_fast} outside [0, 1]")));
        }
        Ok(ErrorModel { p_fast })
    }

    pub fn p_fast(&self) -> f64 {
        self.p_fast
    }
}

/// Signals that can carry fast errors.
pub trait FastErrors: Sized {
    /// Corrupt each chip/slot independently with probability `p_fast`.
    fn inject<R: Rng + ?Sized>(&self, em: &ErrorModel, rng: &mut R) -> Self;

    /// A single fast error at `index`.
    fn flip(&self, index: usize) -> Self;
}

/// RTW fast error: the chip's sign is inverted.
impl FastErrors for RtwSignal {
    fn inject<R: Rng + ?Sized>(&self, em: &ErrorModel, rng: &mut R) -> Self {
        let chips = self
            .chips()
            .iter()
            .map(|&c| if rng.random_bool(em.p_fast) { c.saturating_neg() } else { c })
            .collect();
        RtwSignal::from_chips(chips).expect("length preserved")
    }

    fn flip(&self, index: usize) -> Self {
        self.with_chip_negated(index)
    }
}

/// Spike fast error: the slot's membership is toggled (spurious or missing
/// spike).
impl FastErrors for SpikeTrain {
    fn inject<R: Rng + ?Sized>(&self, em: &ErrorModel, rng: &mut R) -> Self {
        let mut out = self.clone();
        for slot in 0..self.n_slots() {
            if rng.random_bool(em.p_fast) {
                out = out.with_slot_toggled(slot);
            }
        }
        out
    }

    fn flip(&self, index: usize) -> Self {
        self.with_slot_toggled(index)
    }
}

/// Apply fast errors to `x` using the given stream.
pub fn inject_errors<S: FastErrors, R: Rng + ?Sized>(x: &S, em: &ErrorModel, rng: &mut R) -> S {
    x.inject(em, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{stream, StreamPurpose};
    use crate::signal::{gen_rtw, zero_signal};

    fn h(n: usize, seed: u64) -> RtwSignal {
        gen_rtw(&mut stream(seed, StreamPurpose::Reference, 0), n).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(FollowerConfig::boxcar(0, 0.5).is_err());
        assert!(FollowerConfig::boxcar(4, 0.0).is_err());
        assert!(FollowerConfig::boxcar(4, 1.0).is_err());
        assert!(FollowerConfig::exponential(0.0, 0.5).is_err());
        assert!(FollowerConfig::exponential(1.5, 0.5).is_err());
        assert_eq!(FollowerConfig::exponential(0.1, 0.5).unwrap().span(), 40);
        assert!(ErrorModel::new(-0.1).is_err());
    }

    #[test]
    fn noise_free_rtw_decisions() {
        let href = h(200, 1);
        for w in [1, 2, 16, 200] {
            let cfg = FollowerConfig::boxcar(w, 0.5).unwrap();
            let hi = follower_rtw(&href, &href, &cfg).unwrap();
            assert_eq!(hi.trace.len(), 200 - w + 1);
            assert!(hi.trace.iter().all(|&d| d == Decision::High));
            let lo = follower_rtw(&zero_signal(200).unwrap(), &href, &cfg).unwrap();
            assert!(lo.trace.iter().all(|&d| d == Decision::Low));
            assert_eq!(lo.final_bit, Decision::Low);
        }
        let cfg = FollowerConfig::boxcar(201, 0.5).unwrap();
        assert!(follower_rtw(&href, &href, &cfg).is_err());
    }

    #[test]
    fn tie_goes_high() {
        // Product (+1, -1, +1, +1): window-4 mean is exactly 0.5.
        let x = RtwSignal::from_chips(vec![1, -1, 1, 1]).unwrap();
        let href = RtwSignal::from_chips(vec![1, 1, 1, 1]).unwrap();
        let out = follower_rtw(&x, &href, &FollowerConfig::boxcar(4, 0.5).unwrap()).unwrap();
        assert_eq!(out.final_bit, Decision::High);
    }

    #[test]
    fn exponential_settles() {
        let href = h(100, 2);
        let cfg = FollowerConfig::exponential(0.25, 0.5).unwrap();
        let out = follower_rtw(&href, &href, &cfg).unwrap();
        assert_eq!(out.trace.len(), 100);
        // mean_t = 1 - 0.75^(t+1): below 0.5 for t = 0, 1 and above after.
        assert_eq!(&out.trace[..3], &[Decision::Low, Decision::Low, Decision::High]);
        assert_eq!(out.final_bit, Decision::High);
    }

    #[test]
    fn spike_follower() {
        let hs = SpikeTrain::from_slots(20, [0, 5, 10, 15]).unwrap();
        let cfg = FollowerConfig::boxcar(5, 0.5).unwrap();
        let out = follower_spike(&hs, &hs, &cfg).unwrap();
        assert!(out.trace.iter().all(|&d| d == Decision::High));
        let empty = SpikeTrain::empty(20).unwrap();
        let out = follower_spike(&empty, &hs, &cfg).unwrap();
        assert!(out.trace.iter().all(|&d| d == Decision::Low));

        let sparse = SpikeTrain::from_slots(20, [0]).unwrap();
        let out = follower_spike(&sparse, &sparse, &cfg).unwrap();
        assert_eq!(out.trace[0], Decision::High);
        assert_eq!(out.trace[1], Decision::Undecidable);
        assert_eq!(out.final_bit, Decision::Undecidable);
        assert_eq!(out.final_bit.as_bit(), None);
    }

    #[test]
    fn injection_extremes() {
        let x = h(500, 3);
        let mut rng = stream(1, StreamPurpose::Fault, 0);
        assert_eq!(inject_errors(&x, &ErrorModel::new(0.0).unwrap(), &mut rng), x);
        assert_eq!(inject_errors(&x, &ErrorModel::new(1.0).unwrap(), &mut rng), x.neg());
        let s = SpikeTrain::from_slots(70, [1, 2, 69]).unwrap();
        let all = inject_errors(&s, &ErrorModel::new(1.0).unwrap(), &mut rng);
        assert_eq!(all.count(), 67);
        assert!(!all.contains(69));
    }

    #[test]
    fn injection_rate() {
        // Binomial(10^6, 0.1): sigma = 300, 3 sigma = 900.
        let x = h(1_000_000, 4);
        let y = inject_errors(&x, &ErrorModel::new(0.1).unwrap(), &mut stream(4, StreamPurpose::Fault, 0));
        let flipped = x.chips().iter().zip(y.chips()).filter(|(a, b)| a != b).count() as i64;
        assert!((flipped - 100_000).abs() <= 900, "{flipped}");
        let again = inject_errors(&x, &ErrorModel::new(0.1).unwrap(), &mut stream(4, StreamPurpose::Fault, 0));
        assert_eq!(y, again);
    }
}
