//! Quantum and quasiclassical dynamics of a two-spin Ising molecule driven by
//! a rotating field.
//!
//! The quantum engine evolves the four amplitudes of the molecule in the frame
//! rotating with the pulse carrier; the classical engine integrates the torque
//! equations of two spin-1/2-length vectors in the same frame. Both produce a
//! [`Trajectory`] of spin averages on identical time grids so the two pictures
//! can be compared sample by sample.

pub mod classical;
pub mod error;
pub mod quantum;
pub mod sequence;
pub mod spin;
pub mod trajectory;

pub use classical::{
    classical_derivative, effective_field, evolve_classical_rk4, rotating_energy, simulate_classical, EffectiveField,
    Spin,
};
pub use error::{Error, Result};
pub use quantum::{
    build_rotating_hamiltonian, evolve_exact, evolve_rk4, frame_transform, simulate_quantum, FrameDirection,
    RotatingHamiltonian, SpectralPropagator,
};
pub use sequence::{pi_pulse, run_sequence, InitialState, IntegratorSettings, PulseSequence, SequenceEntry};
pub use spin::{
    concurrence, energy_levels, observables_from_amplitudes, product_state, transition_frequencies, BlochAngles,
    ClassicalState, Observables, PulseSpec, QuantumState, SpinSystemParams, SpinVector, Transition,
    TransitionFrequencies,
};
pub use trajectory::{Engine, Trajectory};
