//! Static description of the two-spin molecule: parameters, states, level
//! structure, observables and entanglement.
//!
//! Conventions used throughout the crate:
//!
//! - ħ = 1, all frequencies are angular frequencies.
//! - Basis order is `|00⟩, |01⟩, |10⟩, |11⟩`; the first index belongs to spin A,
//!   the second to spin B.
//! - Index 0 is the `Iᶻ = +1/2` state, index 1 is `Iᶻ = −1/2`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Normalization tolerance enforced when a [`QuantumState`] is constructed.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Tolerance used by [`observables_from_amplitudes`] and [`concurrence`].
pub const OBSERVABLE_NORM_TOLERANCE: f64 = 1e-6;

/// Magnetic quantum number of basis index `0` or `1`.
#[inline]
pub(crate) fn m_of(index: usize) -> f64 {
    0.5 - index as f64
}

/// Magnetic quantum numbers `(m₁, m₂)` of basis state `k` in `0..4`.
#[inline]
pub(crate) fn m_pair(k: usize) -> (f64, f64) {
    (m_of(k >> 1), m_of(k & 1))
}

/// Static molecule parameters: Zeeman frequencies of both spins and the Ising
/// constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSystemParams {
    pub omega1: f64,
    pub omega2: f64,
    pub j_coupling: f64,
}

impl SpinSystemParams {
    pub fn new(omega1: f64, omega2: f64, j_coupling: f64) -> Result<Self> {
        let p = Self { omega1, omega2, j_coupling };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        finite("omega1", self.omega1)?;
        finite("omega2", self.omega2)?;
        finite("j_coupling", self.j_coupling)
    }
}

/// One rectangular pulse of a field rotating at `carrier`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub carrier: f64,
    pub rabi1: f64,
    pub rabi2: f64,
    pub duration: f64,
}

impl PulseSpec {
    pub fn new(carrier: f64, rabi1: f64, rabi2: f64, duration: f64) -> Result<Self> {
        let p = Self { carrier, rabi1, rabi2, duration };
        p.validate()?;
        Ok(p)
    }

    /// The same carrier with both drive amplitudes switched off.
    pub fn free(carrier: f64, duration: f64) -> Self {
        Self { carrier, rabi1: 0.0, rabi2: 0.0, duration }
    }

    pub fn validate(&self) -> Result<()> {
        finite("carrier", self.carrier)?;
        non_negative("rabi1", self.rabi1)?;
        non_negative("rabi2", self.rabi2)?;
        non_negative("duration", self.duration)
    }
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

/// Pure state of the molecule, `c₀₀|00⟩ + c₀₁|01⟩ + c₁₀|10⟩ + c₁₁|11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState {
    amps: [Complex64; 4],
}

impl QuantumState {
    /// Builds a state, rejecting amplitudes whose squared norm is not 1
    /// within [`NORM_TOLERANCE`].
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let s = Self { amps };
        let norm_sq = s.norm_sq();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE || !norm_sq.is_finite() {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(s)
    }

    /// No normalization check. Integrators use this and monitor drift themselves.
    pub fn from_amplitudes_unchecked(amps: [Complex64; 4]) -> Self {
        Self { amps }
    }

    /// Computational basis state `|ab⟩`.
    pub fn basis(a: usize, b: usize) -> Self {
        assert!(a < 2 && b < 2, "basis indices are 0 or 1");
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[2 * a + b] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn c00(&self) -> Complex64 {
        self.amps[0]
    }
    pub fn c01(&self) -> Complex64 {
        self.amps[1]
    }
    pub fn c10(&self) -> Complex64 {
        self.amps[2]
    }
    pub fn c11(&self) -> Complex64 {
        self.amps[3]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest componentwise amplitude difference.
    pub fn max_abs_diff(&self, other: &QuantumState) -> f64 {
        self.amps.iter().zip(other.amps.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Classical spin vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpinVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpinVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Spin-1/2 vector pointing along the Bloch angles.
    pub fn from_bloch(angles: BlochAngles) -> Self {
        let (st, ct) = angles.theta.sin_cos();
        let (sp, cp) = angles.phi.sin_cos();
        Self::new(0.5 * st * cp, 0.5 * st * sp, 0.5 * ct)
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self { x: self.y * o.z - self.z * o.y, y: self.z * o.x - self.x * o.z, z: self.x * o.y - self.y * o.x }
    }

    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn transverse(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    /// Rotates the transverse part by `angle` about +z.
    pub fn rotate_z(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y, self.z)
    }
}

impl std::ops::Add for SpinVector {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

/// Two classical spins.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassicalState {
    pub spin1: SpinVector,
    pub spin2: SpinVector,
}

impl ClassicalState {
    pub fn new(spin1: SpinVector, spin2: SpinVector) -> Self {
        Self { spin1, spin2 }
    }

    pub fn from_bloch(a: BlochAngles, b: BlochAngles) -> Self {
        Self::new(SpinVector::from_bloch(a), SpinVector::from_bloch(b))
    }

    pub fn observables(&self) -> Observables {
        Observables {
            i1x: self.spin1.x,
            i1y: self.spin1.y,
            i1z: self.spin1.z,
            i2x: self.spin2.x,
            i2y: self.spin2.y,
            i2z: self.spin2.z,
            norm: self.spin1.length(),
            concurrence: None,
        }
    }
}

/// Polar and azimuthal angle of a single spin on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    pub const fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }
}

/// Spin averages of one sample.
///
/// For quantum samples `norm` is the state norm `‖c‖` and `concurrence` is
/// set. Classical samples store the length of spin 1 in `norm` and leave
/// `concurrence` empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub i1x: f64,
    pub i1y: f64,
    pub i1z: f64,
    pub i2x: f64,
    pub i2y: f64,
    pub i2z: f64,
    pub norm: f64,
    pub concurrence: Option<f64>,
}

impl Observables {
    pub fn components(&self) -> [f64; 6] {
        [self.i1x, self.i1y, self.i1z, self.i2x, self.i2y, self.i2z]
    }

    /// Transverse (xy) amplitude of spin 1.
    pub fn transverse1(&self) -> f64 {
        self.i1x.hypot(self.i1y)
    }

    pub fn transverse2(&self) -> f64 {
        self.i2x.hypot(self.i2y)
    }
}

/// Four energies of the static Ising Hamiltonian in basis order.
pub fn energy_levels(params: &SpinSystemParams) -> [f64; 4] {
    let SpinSystemParams { omega1, omega2, j_coupling } = *params;
    std::array::from_fn(|k| {
        let (m1, m2) = m_pair(k);
        -(omega1 * m1 + omega2 * m2 + 2.0 * j_coupling * m1 * m2)
    })
}

/// Single-spin-flip transitions of the molecule.
///
/// The digit names the state of the *other* spin: `B1` flips spin B while
/// spin A sits in `|1⟩`, i.e. the `|10⟩ ↔ |11⟩` transition at `ω₂ − J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transition {
    /// `|00⟩ ↔ |01⟩`
    B0,
    /// `|10⟩ ↔ |11⟩`
    B1,
    /// `|00⟩ ↔ |10⟩`
    A0,
    /// `|01⟩ ↔ |11⟩`
    A1,
}

impl Transition {
    pub const ALL: [Transition; 4] = [Transition::B0, Transition::B1, Transition::A0, Transition::A1];

    /// Basis indices of the lower- and higher-index state of the pair.
    pub fn levels(self) -> (usize, usize) {
        match self {
            Transition::B0 => (0, 1),
            Transition::B1 => (2, 3),
            Transition::A0 => (0, 2),
            Transition::A1 => (1, 3),
        }
    }

    pub fn flips_spin_a(self) -> bool {
        matches!(self, Transition::A0 | Transition::A1)
    }

    pub fn describe(self) -> &'static str {
        match self {
            Transition::B0 => "spin B with A in |0>",
            Transition::B1 => "spin B with A in |1>",
            Transition::A0 => "spin A with B in |0>",
            Transition::A1 => "spin A with B in |1>",
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Transition::B0 => "B0",
            Transition::B1 => "B1",
            Transition::A0 => "A0",
            Transition::A1 => "A1",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Transition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "B0" => Ok(Transition::B0),
            "B1" => Ok(Transition::B1),
            "A0" => Ok(Transition::A0),
            "A1" => Ok(Transition::A1),
            other => Err(format!("unknown transition `{other}` (expected A0, A1, B0 or B1)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionFrequencies {
    pub b0: f64,
    pub b1: f64,
    pub a0: f64,
    pub a1: f64,
}

impl TransitionFrequencies {
    pub fn get(&self, t: Transition) -> f64 {
        match t {
            Transition::B0 => self.b0,
            Transition::B1 => self.b1,
            Transition::A0 => self.a0,
            Transition::A1 => self.a1,
        }
    }
}

/// Positive energy differences of the four single-flip level pairs.
pub fn transition_frequencies(params: &SpinSystemParams) -> TransitionFrequencies {
    let e = energy_levels(params);
    let gap = |t: Transition| {
        let (lo, hi) = t.levels();
        (e[hi] - e[lo]).abs()
    };
    TransitionFrequencies {
        b0: gap(Transition::B0),
        b1: gap(Transition::B1),
        a0: gap(Transition::A0),
        a1: gap(Transition::A1),
    }
}

fn check_norm(state: &QuantumState) -> Result<()> {
    let norm_sq = state.norm_sq();
    if (norm_sq - 1.0).abs() > OBSERVABLE_NORM_TOLERANCE || !norm_sq.is_finite() {
        Err(Error::NotNormalized { norm_sq })
    } else {
        Ok(())
    }
}

/// Pure-state concurrence `2·|c₀₀c₁₁ − c₀₁c₁₀|`.
pub fn concurrence(state: &QuantumState) -> Result<f64> {
    check_norm(state)?;
    Ok(concurrence_raw(state))
}

fn concurrence_raw(state: &QuantumState) -> f64 {
    let [c00, c01, c10, c11] = state.amps;
    2.0 * (c00 * c11 - c01 * c10).norm()
}

/// Spin averages `⟨I₁⟩`, `⟨I₂⟩` with norm and concurrence.
pub fn observables_from_amplitudes(state: &QuantumState) -> Result<Observables> {
    check_norm(state)?;
    let [c00, c01, c10, c11] = state.amps;
    let p = |c: Complex64| c.norm_sqr();
    // ⟨I⁻⟩-type coherences; x = Re, y = −Im
    let s1 = c10.conj() * c00 + c11.conj() * c01;
    let s2 = c01.conj() * c00 + c11.conj() * c10;
    Ok(Observables {
        i1x: s1.re,
        i1y: -s1.im,
        i1z: 0.5 * (p(c00) + p(c01) - p(c10) - p(c11)),
        i2x: s2.re,
        i2y: -s2.im,
        i2z: 0.5 * (p(c00) - p(c01) + p(c10) - p(c11)),
        norm: state.norm_sq().sqrt(),
        concurrence: Some(concurrence_raw(state)),
    })
}

/// Tensor product of two single-spin states `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn product_state(spin_a: BlochAngles, spin_b: BlochAngles) -> QuantumState {
    let single = |a: BlochAngles| {
        let (s, c) = (0.5 * a.theta).sin_cos();
        [Complex64::new(c, 0.0), Complex64::from_polar(s, a.phi)]
    };
    let a = single(spin_a);
    let b = single(spin_b);
    QuantumState { amps: [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]] }
}
