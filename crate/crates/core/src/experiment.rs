// SPDX-License-Identifier: Apache-2.0

//! Follower error-rate experiments, window inversion, and fault propagation.
//!
//! For an RTW input the follower's boxcar sum over `W` chips is `2k - W`,
//! where `k` counts chips on which the input agrees with the reference. With
//! `X = H` corrupted at rate `p`, `k ~ Bin(W, 1 - p)`; with `X` an independent
//! reference (corrupted or not), `k ~ Bin(W, 1/2)`. Both error rates are
//! therefore exact binomial tails, which serve as oracles for the Monte Carlo
//! estimates.

use std::collections::HashMap;
use std::time::Instant;

use rand::RngExt;
use rayon::prelude::*;

use crate::binomial::{lower_tail, upper_tail};
use crate::error::{Error, Result};
use crate::follower::{
    decides_high, follower_rtw, follower_spike, Decision, ErrorModel, FastErrors, FollowerConfig, Smoothing,
};
use crate::gate::{GateAlgebra, GateKind};
use crate::netlist::{lower_circuit, Assignment, Circuit};
use crate::reference::{Backend, References, ReferenceSystem};
use crate::report::ExperimentReport;
use crate::rtw::RtwAlgebra;
use crate::seed::{stream, StreamPurpose};
use crate::signal::{gen_disjoint_spike_trains_with, gen_rtw, RtwSignal, SpikeTrain};
use crate::spike::SpikeAlgebra;

/// Smallest agreement count `k` for which a window of `window` chips decides H.
pub fn decision_cut(window: usize, threshold: f64) -> u64 {
    (0..=window as u64)
        .find(|&k| decides_high(2 * k as i64 - window as i64, window, threshold))
        .unwrap_or(window as u64 + 1)
}

/// Exact probability that a boxcar follower reads `X = H`, corrupted at
/// rate `p_fast`, as L.
pub fn miss_probability(window: usize, p_fast: f64, threshold: f64) -> f64 {
    match decision_cut(window, threshold) {
        0 => 0.0,
        cut => lower_tail(window as u64, 1.0 - p_fast, cut - 1),
    }
}

/// Exact probability that a boxcar follower reads an independent reference
/// as H. Fast errors do not change this: a sign-flipped independent wave is
/// still a fair coin per chip.
pub fn false_alarm_probability(window: usize, threshold: f64) -> f64 {
    upper_tail(window as u64, 0.5, decision_cut(window, threshold))
}

/// The larger of the miss and false-alarm probabilities.
pub fn misclassification_probability(window: usize, p_fast: f64, threshold: f64) -> f64 {
    miss_probability(window, p_fast, threshold).max(false_alarm_probability(window, threshold))
}

/// Windows beyond this are rejected as impractical.
pub const MAX_WINDOW: usize = 100_000_000;

/// Smallest boxcar window `W` such that every window of `W` chips or more
/// keeps the exact misclassification probability at or below `target`.
///
/// The tail probability is not monotone in `W` (the threshold count rounds
/// up to an integer), so the search starts from a Hoeffding bound, beyond
/// which every window qualifies, and walks down to the last failing window.
pub fn required_window(p_fast: f64, threshold: f64, target: f64) -> Result<usize> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidArgument(format!("threshold {threshold} outside (0, 1)")));
    }
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidArgument(format!("target {target} outside (0, 1)")));
    }
    if !(0.0..1.0).contains(&p_fast) {
        return Err(Error::InvalidArgument(format!("p_fast {p_fast} outside [0, 1)")));
    }
    let margin = (1.0 - threshold) / 2.0 - p_fast;
    if margin <= 0.0 {
        return Err(Error::Infeasible(format!(
            "p_fast {p_fast} leaves no margin below threshold {threshold} (need p_fast < {})",
            (1.0 - threshold) / 2.0
        )));
    }
    let delta = margin.min(threshold / 2.0);
    let bound = ((1.0 / target).ln() / (2.0 * delta * delta)).ceil().max(1.0);
    if bound > MAX_WINDOW as f64 {
        return Err(Error::Infeasible(format!(
            "required window exceeds {MAX_WINDOW} chips (margin {margin})"
        )));
    }
    let mut window = bound as usize;
    while window >= 1 {
        if misclassification_probability(window, p_fast, threshold) > target {
            return Ok(window + 1);
        }
        window -= 1;
    }
    Ok(1)
}

/// Where Monte Carlo randomness comes from and which backend to simulate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentSetup {
    pub backend: Backend,
    pub seed: u64,
    /// Per-slot firing probability of each spike reference.
    pub density: Option<f64>,
}

impl ExperimentSetup {
    pub fn rtw(seed: u64) -> Self {
        ExperimentSetup {
            backend: Backend::Rtw,
            seed,
            density: None,
        }
    }

    pub fn spike(seed: u64, density: f64) -> Self {
        ExperimentSetup {
            backend: Backend::Spike,
            seed,
            density: Some(density),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MisclassificationReport {
    /// `X = H`, decided as anything but H.
    pub miss: ExperimentReport,
    /// `X` an independent reference, decided as anything but L.
    pub false_alarm: ExperimentReport,
    /// Both cases pooled: `(misses + false alarms) / (2 * trials)`.
    pub error: ExperimentReport,
}

impl MisclassificationReport {
    pub fn rows(&self) -> Vec<ExperimentReport> {
        vec![self.miss.clone(), self.false_alarm.clone(), self.error.clone()]
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct TrialOutcome {
    miss: bool,
    false_alarm: bool,
    undecidable: u8,
}

fn outcome(on_h: Decision, on_other: Decision) -> TrialOutcome {
    TrialOutcome {
        miss: on_h != Decision::High,
        false_alarm: on_other != Decision::Low,
        undecidable: u8::from(on_h == Decision::Undecidable) + u8::from(on_other == Decision::Undecidable),
    }
}

/// Monte Carlo estimate of the follower's miss and false-alarm rates.
///
/// Trial `t` draws from stream `(seed, t)`: a fresh reference `H` and an
/// independent reference `G` of `cfg.span()` chips, then fast errors on each,
/// and records the follower's final decision for both. In boxcar RTW mode the
/// exact binomial rates are attached as oracles.
pub fn measure_misclassification(
    setup: &ExperimentSetup,
    cfg: &FollowerConfig,
    em: &ErrorModel,
    trials: u64,
) -> Result<MisclassificationReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let span = cfg.span();
    let start = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(setup.seed, StreamPurpose::Trial, t);
            match setup.backend {
                Backend::Rtw => {
                    let h = gen_rtw(&mut rng, span)?;
                    let g = gen_rtw(&mut rng, span)?;
                    let xh = h.inject(em, &mut rng);
                    let xg = g.inject(em, &mut rng);
                    Ok(outcome(
                        follower_rtw(&xh, &h, cfg)?.final_bit,
                        follower_rtw(&xg, &h, cfg)?.final_bit,
                    ))
                }
                Backend::Spike => {
                    let density = setup
                        .density
                        .ok_or_else(|| Error::InvalidArgument("spike experiments need a density".into()))?;
                    let refs = gen_disjoint_spike_trains_with(&mut rng, 2, span, density)?;
                    let xh = refs[0].inject(em, &mut rng);
                    let xg = refs[1].inject(em, &mut rng);
                    Ok(outcome(
                        follower_spike(&xh, &refs[0], cfg)?.final_bit,
                        follower_spike(&xg, &refs[0], cfg)?.final_bit,
                    ))
                }
            }
        })
        .collect::<Result<_>>()?;
    let wall_ms = start.elapsed().as_millis() as u64;

    let misses = outcomes.iter().filter(|o| o.miss).count() as u64;
    let false_alarms = outcomes.iter().filter(|o| o.false_alarm).count() as u64;
    let undecidable: u64 = outcomes.iter().map(|o| u64::from(o.undecidable)).sum();

    let (oracle_miss, oracle_fa) = match (setup.backend, cfg.smoothing()) {
        (Backend::Rtw, Smoothing::Boxcar { window }) => (
            Some(miss_probability(window, em.p_fast(), cfg.threshold())),
            Some(false_alarm_probability(window, cfg.threshold())),
        ),
        _ => (None, None),
    };
    let row = |experiment: &str, events: u64, n: u64, oracle: Option<f64>| {
        let measured = events as f64 / n as f64;
        ExperimentReport {
            experiment: experiment.into(),
            backend: setup.backend,
            seed: Some(setup.seed),
            trials: Some(n),
            window: Some(span),
            theta: Some(cfg.threshold()),
            p_fast: Some(em.p_fast()),
            measured,
            oracle,
            stderr: Some((measured * (1.0 - measured) / n as f64).sqrt()),
            wall_ms,
            events,
            undecidable: 0,
        }
    };
    let mut miss = row("miss", misses, trials, oracle_miss);
    miss.undecidable = outcomes.iter().filter(|o| o.miss && o.undecidable > 0).count() as u64;
    let false_alarm = row("false_alarm", false_alarms, trials, oracle_fa);
    let pooled_oracle = oracle_miss.zip(oracle_fa).map(|(m, f)| (m + f) / 2.0);
    let mut error = row("error", misses + false_alarms, 2 * trials, pooled_oracle);
    error.undecidable = undecidable;
    Ok(MisclassificationReport {
        miss,
        false_alarm,
        error,
    })
}

/// Analytic report row for [`required_window`].
pub fn window_report(p_fast: f64, threshold: f64, target: f64) -> Result<ExperimentReport> {
    let start = Instant::now();
    let window = required_window(p_fast, threshold, target)?;
    Ok(ExperimentReport {
        experiment: "window".into(),
        backend: Backend::Rtw,
        seed: None,
        trials: None,
        window: Some(window),
        theta: Some(threshold),
        p_fast: Some(p_fast),
        measured: misclassification_probability(window, p_fast, threshold),
        oracle: Some(target),
        stderr: None,
        wall_ms: start.elapsed().as_millis() as u64,
        events: 0,
        undecidable: 0,
    })
}

/// Single-chip view of a gate algebra, used to predict how one fast error
/// travels through a circuit without re-simulating whole signals.
pub trait ChipModel: GateAlgebra
where
    Self::Signal: FastErrors,
{
    type Chip: Copy + PartialEq;

    fn chip(&self, s: &Self::Signal, t: usize) -> Self::Chip;

    /// The same fast error as [`FastErrors::flip`], on one chip.
    fn flip_chip(&self, c: Self::Chip) -> Self::Chip;

    fn not_chip(&self, x: Self::Chip, t: usize) -> Self::Chip;

    fn and_chip(&self, x1: Self::Chip, x2: Self::Chip, t: usize) -> Self::Chip;

    /// A co-input chip that forces the AND output regardless of the other
    /// input: a zero chip, or an empty slot.
    fn masks(&self, c: Self::Chip) -> bool;
}

impl ChipModel for RtwAlgebra {
    type Chip = i32;

    fn chip(&self, s: &RtwSignal, t: usize) -> i32 {
        s.chips()[t]
    }

    fn flip_chip(&self, c: i32) -> i32 {
        c.saturating_neg()
    }

    fn not_chip(&self, x: i32, t: usize) -> i32 {
        self.reference().chips()[t].saturating_sub(x)
    }

    fn and_chip(&self, x1: i32, x2: i32, t: usize) -> i32 {
        x1.saturating_mul(x2).saturating_mul(self.reference().chips()[t])
    }

    fn masks(&self, c: i32) -> bool {
        c == 0
    }
}

impl ChipModel for SpikeAlgebra {
    type Chip = bool;

    fn chip(&self, s: &SpikeTrain, t: usize) -> bool {
        s.contains(t)
    }

    fn flip_chip(&self, c: bool) -> bool {
        !c
    }

    fn not_chip(&self, x: bool, t: usize) -> bool {
        self.reference().contains(t) && !x
    }

    fn and_chip(&self, x1: bool, x2: bool, _t: usize) -> bool {
        x1 && x2
    }

    fn masks(&self, c: bool) -> bool {
        !c
    }
}

/// Predict whether a fast error on input `input` at chip `t` reaches any
/// output, from the fault-free trace and the masking rule alone.
///
/// A disturbed chip passes through NOT; through AND it passes unless the
/// undisturbed co-input chip masks it. When both AND inputs are disturbed
/// (reconvergent fan-out) the disturbed chip values are combined directly.
pub fn predict_propagation<A>(c: &Circuit, good: &HashMap<&str, &A::Signal>, alg: &A, input: usize, t: usize) -> bool
where
    A: ChipModel,
    A::Signal: FastErrors,
{
    let good_chip = |wire: &str| alg.chip(good[wire], t);
    let mut disturbed: HashMap<&str, A::Chip> = HashMap::new();
    let src = c.inputs()[input].as_str();
    let flipped = alg.flip_chip(good_chip(src));
    if flipped == good_chip(src) {
        return false;
    }
    disturbed.insert(src, flipped);
    for gate in c.scheduled() {
        let value = match gate.kind {
            GateKind::Not => disturbed.get(gate.inputs[0].as_str()).map(|&x| alg.not_chip(x, t)),
            GateKind::And => {
                let (a, b) = (gate.inputs[0].as_str(), gate.inputs[1].as_str());
                match (disturbed.get(a).copied(), disturbed.get(b).copied()) {
                    (None, None) => None,
                    (Some(x), None) if !alg.masks(good_chip(b)) => Some(alg.and_chip(x, good_chip(b), t)),
                    (None, Some(y)) if !alg.masks(good_chip(a)) => Some(alg.and_chip(good_chip(a), y, t)),
                    (Some(x), Some(y)) => Some(alg.and_chip(x, y, t)),
                    _ => None,
                }
            }
            kind => unreachable!("{kind} in a lowered circuit"),
        };
        if let Some(v) = value {
            if v != good_chip(&gate.output) {
                disturbed.insert(&gate.output, v);
            }
        }
    }
    c.outputs().iter().any(|w| disturbed.contains_key(w.as_str()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationReport {
    /// `measured` is the simulated propagation rate, `oracle` the predicted.
    pub report: ExperimentReport,
    pub measured: Vec<bool>,
    pub predicted: Vec<bool>,
    /// `(input index, chip)` of each trial's fault.
    pub faults: Vec<(usize, usize)>,
}

impl PropagationReport {
    pub fn mismatches(&self) -> usize {
        self.measured.iter().zip(&self.predicted).filter(|(m, p)| m != p).count()
    }
}

fn propagation_with<A>(
    c: &Circuit,
    a: &Assignment,
    alg: &A,
    trials: u64,
    seed: u64,
) -> Result<Vec<(usize, usize, bool, bool)>>
where
    A: ChipModel,
    A::Signal: FastErrors,
{
    let good = crate::netlist::evaluate_with(c, a, alg)?;
    let good_map: HashMap<&str, &A::Signal> = good.wires.iter().map(|(w, s)| (w.as_str(), s)).collect();
    let inputs: Vec<A::Signal> = c.inputs().iter().map(|w| good_map[w.as_str()].clone()).collect();
    let horizon = alg.horizon();
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream(seed, StreamPurpose::Trial, trial);
            let input = rng.random_range(0..inputs.len());
            let t = rng.random_range(0..horizon);
            let mut faulty_inputs = inputs.clone();
            faulty_inputs[input] = faulty_inputs[input].flip(t);
            let faulty = crate::netlist::evaluate_signals(c, &faulty_inputs, alg)?;
            let measured = c
                .outputs()
                .iter()
                .any(|w| faulty.signal(w) != Some(good_map[w.as_str()]));
            let predicted = predict_propagation(c, &good_map, alg, input, t);
            Ok((input, t, measured, predicted))
        })
        .collect()
}

/// Inject one fast error per trial into a random chip of a random primary
/// input and record whether any output signal changes. The circuit is
/// lowered first; `H = H_1` of `sys`.
pub fn measure_error_propagation(
    c: &Circuit,
    a: &Assignment,
    sys: &ReferenceSystem,
    trials: u64,
    seed: u64,
) -> Result<PropagationReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    if c.inputs().is_empty() {
        return Err(Error::InvalidArgument("circuit has no primary inputs to disturb".into()));
    }
    let lowered = lower_circuit(c);
    let start = Instant::now();
    let rows = match sys.references() {
        References::Rtw(refs) => propagation_with(&lowered, a, &RtwAlgebra::new(refs[0].clone()), trials, seed)?,
        References::Spike(refs) => {
            if refs[0].is_empty() {
                return Err(Error::DegenerateReference);
            }
            propagation_with(&lowered, a, &SpikeAlgebra::new(refs[0].clone()), trials, seed)?
        }
    };
    let wall_ms = start.elapsed().as_millis() as u64;
    let measured: Vec<bool> = rows.iter().map(|r| r.2).collect();
    let predicted: Vec<bool> = rows.iter().map(|r| r.3).collect();
    let events = measured.iter().filter(|&&m| m).count() as u64;
    let rate = events as f64 / trials as f64;
    let predicted_rate = predicted.iter().filter(|&&p| p).count() as f64 / trials as f64;
    Ok(PropagationReport {
        report: ExperimentReport {
            experiment: "propagation".into(),
            backend: sys.backend(),
            seed: Some(seed),
            trials: Some(trials),
            window: None,
            theta: None,
            p_fast: None,
            measured: rate,
            oracle: Some(predicted_rate),
            stderr: Some((rate * (1.0 - rate) / trials as f64).sqrt()),
            wall_ms,
            events,
            undecidable: 0,
        },
        measured,
        predicted,
        faults: rows.iter().map(|r| (r.0, r.1)).collect(),
    })
}
