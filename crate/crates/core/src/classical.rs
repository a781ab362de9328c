//! Quasiclassical torque dynamics `İₖ = Iₖ × Bₖ` in the rotating frame.
//!
//! The rotating-frame energy is
//! `H = −(δ₁I₁ᶻ + δ₂I₂ᶻ + 2J I₁ᶻI₂ᶻ + Ω₁I₁ˣ + Ω₂I₂ˣ)` and `Bₖ = −∂H/∂Iₖ`.

use crate::error::{Error, Result};
use crate::sequence::PulseSequence;
use crate::spin::{ClassicalState, PulseSpec, SpinSystemParams, SpinVector};
use crate::trajectory::{segment_grid, Engine, Trajectory};

/// Length deviation from 1/2 at which an integration is declared failed.
pub const LENGTH_DRIFT_LIMIT: f64 = 1e-4;

/// Largest admissible `|B|·step` for the default step (see
/// [`crate::quantum::DEFAULT_STEP_PHASE`]).
pub const DEFAULT_STEP_PHASE: f64 = 0.002;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    A,
    B,
}

/// Rotating-frame field acting on one spin, in rad/time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveField {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl EffectiveField {
    pub fn vector(self) -> SpinVector {
        SpinVector::new(self.x, self.y, self.z)
    }
}

pub fn effective_field(
    which: Spin,
    state: &ClassicalState,
    params: &SpinSystemParams,
    pulse: &PulseSpec,
) -> EffectiveField {
    let (rabi, omega, partner) = match which {
        Spin::A => (pulse.rabi1, params.omega1, state.spin2),
        Spin::B => (pulse.rabi2, params.omega2, state.spin1),
    };
    EffectiveField { x: rabi, y: 0.0, z: omega - pulse.carrier + 2.0 * params.j_coupling * partner.z }
}

/// Time derivatives of both spins.
pub fn classical_derivative(
    state: &ClassicalState,
    params: &SpinSystemParams,
    pulse: &PulseSpec,
) -> (SpinVector, SpinVector) {
    let b1 = effective_field(Spin::A, state, params, pulse).vector();
    let b2 = effective_field(Spin::B, state, params, pulse).vector();
    (state.spin1.cross(b1), state.spin2.cross(b2))
}

/// Rotating-frame energy, conserved along the exact flow.
pub fn rotating_energy(state: &ClassicalState, params: &SpinSystemParams, pulse: &PulseSpec) -> f64 {
    let (s1, s2) = (state.spin1, state.spin2);
    let d1 = params.omega1 - pulse.carrier;
    let d2 = params.omega2 - pulse.carrier;
    -(d1 * s1.z + d2 * s2.z + 2.0 * params.j_coupling * s1.z * s2.z + pulse.rabi1 * s1.x + pulse.rabi2 * s2.x)
}

/// Bound on `|Bₖ|` over all states with spin length 1/2.
pub fn max_field(params: &SpinSystemParams, pulse: &PulseSpec) -> f64 {
    let j = params.j_coupling.abs();
    let bound = |rabi: f64, omega: f64| rabi.hypot((omega - pulse.carrier).abs() + j);
    bound(pulse.rabi1, params.omega1).max(bound(pulse.rabi2, params.omega2))
}

pub fn default_step(params: &SpinSystemParams, pulse: &PulseSpec) -> f64 {
    let b = max_field(params, pulse);
    if b > 0.0 {
        DEFAULT_STEP_PHASE / b
    } else {
        f64::INFINITY
    }
}

fn advance(s: &ClassicalState, d: &(SpinVector, SpinVector), h: f64) -> ClassicalState {
    ClassicalState::new(s.spin1 + d.0.scale(h), s.spin2 + d.1.scale(h))
}

fn rk4_step(s: &ClassicalState, params: &SpinSystemParams, pulse: &PulseSpec, h: f64) -> ClassicalState {
    let k1 = classical_derivative(s, params, pulse);
    let k2 = classical_derivative(&advance(s, &k1, 0.5 * h), params, pulse);
    let k3 = classical_derivative(&advance(s, &k2, 0.5 * h), params, pulse);
    let k4 = classical_derivative(&advance(s, &k3, h), params, pulse);
    let w = h / 6.0;
    let comb = |a: SpinVector, b: SpinVector, c: SpinVector, d: SpinVector| (a + (b + c).scale(2.0) + d).scale(w);
    ClassicalState::new(s.spin1 + comb(k1.0, k2.0, k3.0, k4.0), s.spin2 + comb(k1.1, k2.1, k3.1, k4.1))
}

fn rk4_unchecked(
    s: &ClassicalState,
    params: &SpinSystemParams,
    pulse: &PulseSpec,
    tau: f64,
    step: f64,
) -> ClassicalState {
    let mut s = *s;
    if tau > 0.0 {
        let n = (tau / step).ceil().max(1.0) as usize;
        for _ in 0..n - 1 {
            s = rk4_step(&s, params, pulse, step);
        }
        s = rk4_step(&s, params, pulse, tau - (n - 1) as f64 * step);
    }
    s
}

fn check_lengths(s: &ClassicalState, time: f64) -> Result<()> {
    for (spin, v) in [(1, s.spin1), (2, s.spin2)] {
        let length = v.length();
        if (length - 0.5).abs() > LENGTH_DRIFT_LIMIT || !length.is_finite() {
            return Err(Error::LengthDrift { time, spin, length });
        }
    }
    Ok(())
}

/// Fixed-step RK4 over `[0, tau]`; the last step is shortened to end at `tau`.
/// Lengths are monitored, never renormalized.
pub fn evolve_classical_rk4(
    state: &ClassicalState,
    params: &SpinSystemParams,
    pulse: &PulseSpec,
    tau: f64,
    step: f64,
) -> Result<ClassicalState> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParameter { name: "step", value: step });
    }
    crate::spin::non_negative("tau", tau)?;
    let out = rk4_unchecked(state, params, pulse, tau, step);
    check_lengths(&out, tau)?;
    Ok(out)
}

/// Exact drive-free precession for time `t`. Without a drive both fields
/// point along z, so each `Iᶻ` and hence each field is constant.
pub fn precess_free(state: &ClassicalState, params: &SpinSystemParams, carrier: f64, t: f64) -> ClassicalState {
    let free = PulseSpec::free(carrier, t);
    let b1 = effective_field(Spin::A, state, params, &free).z;
    let b2 = effective_field(Spin::B, state, params, &free).z;
    // İ = I × (0,0,b) rotates the transverse part by −b·t
    ClassicalState::new(state.spin1.rotate_z(-b1 * t), state.spin2.rotate_z(-b2 * t))
}

/// Classical counterpart of [`crate::quantum::frame_transform`].
pub fn frame_transform_classical(
    state: &ClassicalState,
    carrier: f64,
    t: f64,
    direction: crate::quantum::FrameDirection,
) -> ClassicalState {
    let angle = match direction {
        crate::quantum::FrameDirection::ToLab => -carrier * t,
        crate::quantum::FrameDirection::ToRotating => carrier * t,
    };
    ClassicalState::new(state.spin1.rotate_z(angle), state.spin2.rotate_z(angle))
}

pub(crate) fn record(traj: &mut Trajectory, t: f64, state: &ClassicalState) -> Result<()> {
    check_lengths(state, t)?;
    traj.push(t, state.observables());
    Ok(())
}

pub(crate) fn pulse_segment(
    state: ClassicalState,
    params: &SpinSystemParams,
    pulse: &PulseSpec,
    start: f64,
    sample_every: f64,
    step: f64,
    traj: &mut Trajectory,
) -> Result<ClassicalState> {
    if pulse.rabi1 == 0.0 && pulse.rabi2 == 0.0 {
        return free_segment(state, params, pulse.carrier, start, pulse.duration, sample_every, traj);
    }
    let (n, dt) = segment_grid(pulse.duration, sample_every);
    let step = step.min(dt);
    let mut state = state;
    for k in 1..=n {
        state = rk4_unchecked(&state, params, pulse, dt, step);
        record(traj, start + k as f64 * dt, &state)?;
    }
    Ok(state)
}

pub(crate) fn free_segment(
    state: ClassicalState,
    params: &SpinSystemParams,
    carrier: f64,
    start: f64,
    duration: f64,
    sample_every: f64,
    traj: &mut Trajectory,
) -> Result<ClassicalState> {
    let (n, dt) = segment_grid(duration, sample_every);
    let mut state = state;
    for k in 1..=n {
        state = precess_free(&state, params, carrier, dt);
        record(traj, start + k as f64 * dt, &state)?;
    }
    Ok(state)
}

/// Runs one pulse on the classical spins and samples every `sample_every`.
pub fn simulate_classical(
    initial: &ClassicalState,
    params: &SpinSystemParams,
    pulse: &PulseSpec,
    step: f64,
    sample_every: f64,
) -> Result<Trajectory> {
    params.validate()?;
    pulse.validate()?;
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParameter { name: "step", value: step });
    }
    crate::quantum::check_sampling(sample_every)?;
    let mut traj = Trajectory::start(Engine::Classical, *params, PulseSequence::single(*pulse), initial.observables());
    pulse_segment(*initial, params, pulse, 0.0, sample_every, step, &mut traj)?;
    Ok(traj)
}
