//! Amplitude dynamics in the frame rotating with the pulse carrier.
//!
//! For a carrier `ω` the transformation `c_lab = e^{iωt(m₁+m₂)} c_rot` removes
//! the time dependence of the circularly polarized drive, leaving
//! `i ċ = H c` with a constant real-symmetric `H`. Two propagators are
//! provided: fixed-step RK4 ([`evolve_rk4`]) and an exact spectral propagator
//! ([`evolve_exact`]) used as its oracle.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequence::PulseSequence;
use crate::spin::{m_pair, observables_from_amplitudes, PulseSpec, QuantumState, SpinSystemParams};
use crate::trajectory::{segment_grid, Engine, Trajectory};

/// Norm deviation at which an integration is declared failed.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Largest admissible `‖H‖·step` for the default step.
///
/// RK4 loses norm like `(‖H‖·h)⁶/72` per step. At this value a full π-pulse of
/// the default experiment stays below 1e-9 norm drift and 1e-8 amplitude error.
pub const DEFAULT_STEP_PHASE: f64 = 0.002;

/// Residual bound for the eigendecomposition used by [`evolve_exact`].
pub const EIGEN_RESIDUAL_LIMIT: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Time-independent Hamiltonian of the driven molecule in the rotating frame.
///
/// `coupling_a` links states that differ in spin A (`00↔10`, `01↔11`),
/// `coupling_b` links states that differ in spin B (`00↔01`, `10↔11`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingHamiltonian {
    pub diag: [f64; 4],
    pub coupling_a: f64,
    pub coupling_b: f64,
}

impl RotatingHamiltonian {
    pub fn to_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::from_diagonal(&self.diag.into());
        for (i, j) in [(0, 2), (1, 3)] {
            m[(i, j)] = self.coupling_a;
            m[(j, i)] = self.coupling_a;
        }
        for (i, j) in [(0, 1), (2, 3)] {
            m[(i, j)] = self.coupling_b;
            m[(j, i)] = self.coupling_b;
        }
        m
    }

    pub fn is_diagonal(&self) -> bool {
        self.coupling_a == 0.0 && self.coupling_b == 0.0
    }

    /// Maximum absolute row sum, an upper bound on the spectral radius.
    pub fn max_row_sum(&self) -> f64 {
        let off = self.coupling_a.abs() + self.coupling_b.abs();
        self.diag.iter().map(|d| d.abs() + off).fold(0.0, f64::max)
    }

    #[inline]
    fn apply(&self, c: &[Complex64; 4]) -> [Complex64; 4] {
        let (a, b, d) = (self.coupling_a, self.coupling_b, &self.diag);
        [
            c[0] * d[0] + c[2] * a + c[1] * b,
            c[1] * d[1] + c[3] * a + c[0] * b,
            c[2] * d[2] + c[0] * a + c[3] * b,
            c[3] * d[3] + c[1] * a + c[2] * b,
        ]
    }

    /// Default RK4 step for this Hamiltonian.
    pub fn default_step(&self) -> f64 {
        let norm = self.max_row_sum();
        if norm > 0.0 {
            DEFAULT_STEP_PHASE / norm
        } else {
            f64::INFINITY
        }
    }
}

/// Rotating-frame Hamiltonian for `pulse` acting on the molecule.
pub fn build_rotating_hamiltonian(params: &SpinSystemParams, pulse: &PulseSpec) -> RotatingHamiltonian {
    let d1 = params.omega1 - pulse.carrier;
    let d2 = params.omega2 - pulse.carrier;
    let j = params.j_coupling;
    RotatingHamiltonian {
        diag: std::array::from_fn(|k| {
            let (m1, m2) = m_pair(k);
            -(d1 * m1 + d2 * m2 + 2.0 * j * m1 * m2)
        }),
        coupling_a: -0.5 * pulse.rabi1,
        coupling_b: -0.5 * pulse.rabi2,
    }
}

#[inline]
fn rhs(h: &RotatingHamiltonian, c: &[Complex64; 4]) -> [Complex64; 4] {
    h.apply(c).map(|z| -I * z)
}

#[inline]
fn axpy(c: &[Complex64; 4], s: f64, k: &[Complex64; 4]) -> [Complex64; 4] {
    std::array::from_fn(|i| c[i] + k[i] * s)
}

fn rk4_step(h: &RotatingHamiltonian, c: &[Complex64; 4], dt: f64) -> [Complex64; 4] {
    let k1 = rhs(h, c);
    let k2 = rhs(h, &axpy(c, 0.5 * dt, &k1));
    let k3 = rhs(h, &axpy(c, 0.5 * dt, &k2));
    let k4 = rhs(h, &axpy(c, dt, &k3));
    let w = dt / 6.0;
    std::array::from_fn(|i| c[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w)
}

fn check_step(step: f64) -> Result<()> {
    if step.is_finite() && step > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "step", value: step })
    }
}

fn check_drift(state: &QuantumState, time: f64) -> Result<()> {
    let norm = state.norm_sq().sqrt();
    if (norm - 1.0).abs() > NORM_DRIFT_LIMIT || !norm.is_finite() {
        Err(Error::NormDrift { time, norm })
    } else {
        Ok(())
    }
}

fn rk4_unchecked(state: &QuantumState, h: &RotatingHamiltonian, tau: f64, step: f64) -> QuantumState {
    let mut c = *state.amplitudes();
    if tau > 0.0 {
        let n = (tau / step).ceil().max(1.0) as usize;
        for _ in 0..n - 1 {
            c = rk4_step(h, &c, step);
        }
        // last step lands exactly on tau
        c = rk4_step(h, &c, tau - (n - 1) as f64 * step);
    }
    QuantumState::from_amplitudes_unchecked(c)
}

/// Integrates `i ċ = H c` over `[0, tau]` with classical RK4 steps of size
/// `step`, the last one shortened to end exactly at `tau`.
pub fn evolve_rk4(state: &QuantumState, h: &RotatingHamiltonian, tau: f64, step: f64) -> Result<QuantumState> {
    check_step(step)?;
    crate::spin::non_negative("tau", tau)?;
    let out = rk4_unchecked(state, h, tau, step);
    check_drift(&out, tau)?;
    Ok(out)
}

/// Exact propagator `exp(−iHτ)` from the eigendecomposition of `H`.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    eigenvalues: [f64; 4],
    vectors: Matrix4<f64>,
}

impl SpectralPropagator {
    pub fn new(h: &RotatingHamiltonian) -> Result<Self> {
        if h.is_diagonal() {
            return Ok(Self { eigenvalues: h.diag, vectors: Matrix4::identity() });
        }
        let m = h.to_matrix();
        let eig = SymmetricEigen::new(m);
        let lambda = Matrix4::from_diagonal(&eig.eigenvalues);
        let residual = (m * eig.eigenvectors - eig.eigenvectors * lambda).amax();
        if residual > EIGEN_RESIDUAL_LIMIT || !residual.is_finite() {
            return Err(Error::EigenResidual { residual });
        }
        Ok(Self { eigenvalues: eig.eigenvalues.into(), vectors: eig.eigenvectors })
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        self.eigenvalues
    }

    pub fn propagate(&self, state: &QuantumState, tau: f64) -> QuantumState {
        let c = state.amplitudes();
        let v = &self.vectors;
        let mut out = [ZERO; 4];
        for k in 0..4 {
            // projection onto eigenvector k, then phase
            let mut proj = ZERO;
            for i in 0..4 {
                proj += c[i] * v[(i, k)];
            }
            proj *= Complex64::from_polar(1.0, -self.eigenvalues[k] * tau);
            for (i, o) in out.iter_mut().enumerate() {
                *o += proj * v[(i, k)];
            }
        }
        QuantumState::from_amplitudes_unchecked(out)
    }
}

/// Applies `exp(−iHτ)` exactly. Diagonal Hamiltonians bypass the
/// eigendecomposition.
pub fn evolve_exact(state: &QuantumState, h: &RotatingHamiltonian, tau: f64) -> Result<QuantumState> {
    crate::spin::non_negative("tau", tau)?;
    Ok(SpectralPropagator::new(h)?.propagate(state, tau))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameDirection {
    ToLab,
    ToRotating,
}

/// Moves amplitudes between the lab frame and the frame rotating at
/// `carrier`, evaluated at time `t`.
pub fn frame_transform(state: &QuantumState, carrier: f64, t: f64, direction: FrameDirection) -> QuantumState {
    let sign = match direction {
        FrameDirection::ToLab => 1.0,
        FrameDirection::ToRotating => -1.0,
    };
    let c = state.amplitudes();
    QuantumState::from_amplitudes_unchecked(std::array::from_fn(|k| {
        let (m1, m2) = m_pair(k);
        c[k] * Complex64::from_polar(1.0, sign * carrier * t * (m1 + m2))
    }))
}

pub(crate) fn record(traj: &mut Trajectory, t: f64, state: &QuantumState) -> Result<()> {
    check_drift(state, t)?;
    traj.push(t, observables_from_amplitudes(state)?);
    Ok(())
}

/// Evolves a pulse segment starting at global time `start`, appending one
/// sample per grid point to `traj`. A pulse without drive is propagated
/// exactly.
pub(crate) fn pulse_segment(
    state: QuantumState,
    h: &RotatingHamiltonian,
    start: f64,
    duration: f64,
    sample_every: f64,
    step: f64,
    traj: &mut Trajectory,
) -> Result<QuantumState> {
    if h.is_diagonal() {
        return free_segment(state, h, start, duration, sample_every, traj);
    }
    let (n, dt) = segment_grid(duration, sample_every);
    let step = step.min(dt);
    let mut state = state;
    for k in 1..=n {
        state = rk4_unchecked(&state, h, dt, step);
        record(traj, start + k as f64 * dt, &state)?;
    }
    Ok(state)
}

/// Drive-free segment; the Hamiltonian is diagonal so phases are applied exactly.
pub(crate) fn free_segment(
    state: QuantumState,
    h: &RotatingHamiltonian,
    start: f64,
    duration: f64,
    sample_every: f64,
    traj: &mut Trajectory,
) -> Result<QuantumState> {
    debug_assert!(h.is_diagonal());
    let (n, dt) = segment_grid(duration, sample_every);
    let prop = SpectralPropagator::new(h)?;
    let mut state = state;
    for k in 1..=n {
        state = prop.propagate(&state, dt);
        record(traj, start + k as f64 * dt, &state)?;
    }
    Ok(state)
}

pub(crate) fn check_sampling(sample_every: f64) -> Result<()> {
    if sample_every.is_finite() && sample_every > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "sample_every", value: sample_every })
    }
}

/// Runs one pulse with RK4 and records observables every `sample_every`
/// (rounded so that the grid ends exactly at the pulse end). With both Rabi
/// frequencies zero the phases are applied exactly instead.
pub fn simulate_quantum(
    initial: &QuantumState,
    params: &SpinSystemParams,
    pulse: &PulseSpec,
    step: f64,
    sample_every: f64,
) -> Result<Trajectory> {
    params.validate()?;
    pulse.validate()?;
    check_step(step)?;
    check_sampling(sample_every)?;
    let mut traj = Trajectory::start(
        Engine::Quantum,
        *params,
        PulseSequence::single(*pulse),
        observables_from_amplitudes(initial)?,
    );
    let h = build_rotating_hamiltonian(params, pulse);
    pulse_segment(*initial, &h, 0.0, pulse.duration, sample_every, step, &mut traj)?;
    Ok(traj)
}
