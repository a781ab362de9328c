//! π-pulse construction and multi-pulse runs.

use std::f64::consts::PI;

use crate::classical;
use crate::error::{Error, Result};
use crate::quantum::{self, build_rotating_hamiltonian, frame_transform, FrameDirection};
use crate::spin::{
    non_negative, observables_from_amplitudes, transition_frequencies, ClassicalState, PulseSpec, QuantumState,
    SpinSystemParams, Transition,
};
use crate::trajectory::{Engine, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceEntry {
    pub pulse: PulseSpec,
    /// Drive-free time after the pulse.
    pub delay: f64,
}

/// Pulses applied one after another, optionally preceded by a drive-free
/// interval.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    pub leading_delay: f64,
    pub entries: Vec<SequenceEntry>,
}

impl PulseSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(pulse: PulseSpec) -> Self {
        Self { leading_delay: 0.0, entries: vec![SequenceEntry { pulse, delay: 0.0 }] }
    }

    pub fn with_leading_delay(mut self, delay: f64) -> Self {
        self.leading_delay = delay;
        self
    }

    pub fn then(mut self, pulse: PulseSpec, delay: f64) -> Self {
        self.entries.push(SequenceEntry { pulse, delay });
        self
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("leading_delay", self.leading_delay)?;
        for e in &self.entries {
            e.pulse.validate()?;
            non_negative("delay", e.delay)?;
        }
        Ok(())
    }

    pub fn total_duration(&self) -> f64 {
        self.leading_delay + self.entries.iter().map(|e| e.pulse.duration + e.delay).sum::<f64>()
    }

    /// Carrier of the frame used before the first pulse.
    fn initial_frame(&self) -> f64 {
        self.entries.first().map_or(0.0, |e| e.pulse.carrier)
    }
}

/// Resonant π-pulse on `target`: carrier at the transition frequency and
/// duration `π/Ω` of the driven spin.
pub fn pi_pulse(params: &SpinSystemParams, target: Transition, rabi1: f64, rabi2: f64) -> Result<PulseSpec> {
    params.validate()?;
    non_negative("rabi1", rabi1)?;
    non_negative("rabi2", rabi2)?;
    let driven = if target.flips_spin_a() { rabi1 } else { rabi2 };
    if driven == 0.0 {
        return Err(Error::ZeroRabi { target });
    }
    let freqs = transition_frequencies(params);
    let frequency = freqs.get(target);
    let clash = Transition::ALL
        .iter()
        .filter(|t| t.flips_spin_a() != target.flips_spin_a())
        .any(|&t| (freqs.get(t) - frequency).abs() <= 1e-12 * frequency.abs().max(1.0));
    if clash {
        return Err(Error::NonSelective { target, frequency });
    }
    PulseSpec::new(frequency, rabi1, rabi2, PI / driven)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Quantum(QuantumState),
    Classical(ClassicalState),
}

impl InitialState {
    pub fn engine(&self) -> Engine {
        match self {
            InitialState::Quantum(_) => Engine::Quantum,
            InitialState::Classical(_) => Engine::Classical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSettings {
    /// RK4 step; `None` picks the per-pulse default of each engine.
    pub step: Option<f64>,
    /// Nominal sample spacing, shared by all segments.
    pub sample_every: f64,
}

impl IntegratorSettings {
    /// `samples` intervals across the first pulse of `seq`.
    pub fn per_first_pulse(seq: &PulseSequence, samples: usize, step: Option<f64>) -> Self {
        let reference =
            seq.entries.iter().map(|e| e.pulse.duration).find(|&d| d > 0.0).unwrap_or_else(|| seq.total_duration());
        let sample_every = if reference > 0.0 { reference / samples.max(1) as f64 } else { 1.0 };
        Self { step, sample_every }
    }
}

/// Evolves `initial` through every segment of `seq`.
///
/// The quantum engine keeps amplitudes in the frame of the most recent
/// carrier; whenever the carrier changes they are rebased through the lab
/// frame at the current time. Delays keep the current frame and evolve
/// without drive. Observables are reported in the current frame.
pub fn run_sequence(
    initial: &InitialState,
    params: &SpinSystemParams,
    seq: &PulseSequence,
    engine: Engine,
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    if initial.engine() != engine {
        return Err(Error::EngineMismatch);
    }
    params.validate()?;
    seq.validate()?;
    quantum::check_sampling(settings.sample_every)?;
    if let Some(step) = settings.step {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter { name: "step", value: step });
        }
    }
    match *initial {
        InitialState::Quantum(s) => run_quantum(s, params, seq, settings),
        InitialState::Classical(s) => run_classical(s, params, seq, settings),
    }
}

fn run_quantum(
    mut state: QuantumState,
    params: &SpinSystemParams,
    seq: &PulseSequence,
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    let mut traj = Trajectory::start(Engine::Quantum, *params, seq.clone(), observables_from_amplitudes(&state)?);
    let every = settings.sample_every;
    let mut frame = seq.initial_frame();
    let mut t = 0.0;

    let free_h = |carrier| build_rotating_hamiltonian(params, &PulseSpec::free(carrier, 0.0));
    state = quantum::free_segment(state, &free_h(frame), t, seq.leading_delay, every, &mut traj)?;
    t += seq.leading_delay;

    for entry in &seq.entries {
        let pulse = entry.pulse;
        if pulse.carrier != frame {
            state = frame_transform(&state, frame, t, FrameDirection::ToLab);
            state = frame_transform(&state, pulse.carrier, t, FrameDirection::ToRotating);
            frame = pulse.carrier;
        }
        let h = build_rotating_hamiltonian(params, &pulse);
        let step = settings.step.unwrap_or_else(|| h.default_step());
        state = quantum::pulse_segment(state, &h, t, pulse.duration, every, step, &mut traj)?;
        t += pulse.duration;
        state = quantum::free_segment(state, &free_h(frame), t, entry.delay, every, &mut traj)?;
        t += entry.delay;
    }
    Ok(traj)
}

fn run_classical(
    mut state: ClassicalState,
    params: &SpinSystemParams,
    seq: &PulseSequence,
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    let mut traj = Trajectory::start(Engine::Classical, *params, seq.clone(), state.observables());
    let every = settings.sample_every;
    let mut frame = seq.initial_frame();
    let mut t = 0.0;

    state = classical::free_segment(state, params, frame, t, seq.leading_delay, every, &mut traj)?;
    t += seq.leading_delay;

    for entry in &seq.entries {
        let pulse = entry.pulse;
        if pulse.carrier != frame {
            state = classical::frame_transform_classical(&state, frame, t, FrameDirection::ToLab);
            state = classical::frame_transform_classical(&state, pulse.carrier, t, FrameDirection::ToRotating);
            frame = pulse.carrier;
        }
        let step = settings.step.unwrap_or_else(|| classical::default_step(params, &pulse));
        state = classical::pulse_segment(state, params, &pulse, t, every, step, &mut traj)?;
        t += pulse.duration;
        state = classical::free_segment(state, params, frame, t, entry.delay, every, &mut traj)?;
        t += entry.delay;
    }
    Ok(traj)
}
