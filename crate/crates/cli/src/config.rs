//! Experiment configuration files.
//!
//! ```text
//! # comment
//! [system]
//! omega1 = 200
//! omega2 = 100
//! j = 5
//!
//! [initial]
//! theta1 = pi/2
//! phi1 = -pi/2
//!
//! [pulse]
//! target = B1        # or: carrier = 95 together with duration
//! rabi1 = 0.1
//! rabi2 = 0.02
//!
//! [integrator]
//! samples = 1000
//!
//! [output]
//! prefix = fig12
//! engines = both
//! padding = 0.1
//! ```
//!
//! `[system]` and at least one `[pulse]` are required; `[pulse]` may repeat to
//! build a sequence, with an optional `delay` after each pulse. Numeric values
//! accept plain decimals and multiples of `pi` (`pi/2`, `-pi`, `1.5*pi`).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use spinlab_core::{
    pi_pulse, product_state, BlochAngles, ClassicalState, IntegratorSettings, PulseSequence, PulseSpec, QuantumState,
    SpinSystemParams, Transition,
};

use crate::error::{CliError, Result};

pub const DEFAULT_OMEGA1: f64 = 200.0;
pub const DEFAULT_OMEGA2: f64 = 100.0;
pub const DEFAULT_J: f64 = 5.0;
pub const DEFAULT_RABI1: f64 = 0.1;
pub const DEFAULT_RABI2: f64 = 0.02;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_PADDING: f64 = 0.1;

/// Bloch angles of both spins at t = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialAngles {
    pub spin1: BlochAngles,
    pub spin2: BlochAngles,
}

impl Default for InitialAngles {
    /// Spin 1 along −y, spin 2 along +z.
    fn default() -> Self {
        Self { spin1: BlochAngles::new(PI / 2.0, -PI / 2.0), spin2: BlochAngles::new(0.0, 0.0) }
    }
}

impl InitialAngles {
    pub fn quantum(&self) -> QuantumState {
        product_state(self.spin1, self.spin2)
    }

    pub fn classical(&self) -> ClassicalState {
        ClassicalState::from_bloch(self.spin1, self.spin2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseKind {
    /// π-pulse on a named transition; `duration` overrides π/Ω.
    Pi {
        target: Transition,
        duration: Option<f64>,
    },
    Explicit {
        carrier: f64,
        duration: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseRequest {
    pub kind: PulseKind,
    pub rabi1: f64,
    pub rabi2: f64,
    pub delay: f64,
}

impl PulseRequest {
    pub fn resolve(&self, system: &SpinSystemParams) -> Result<PulseSpec> {
        let pulse = match self.kind {
            PulseKind::Pi { target, duration } => {
                let mut p = pi_pulse(system, target, self.rabi1, self.rabi2)?;
                if let Some(d) = duration {
                    p.duration = d;
                }
                p
            }
            PulseKind::Explicit { carrier, duration } => PulseSpec::new(carrier, self.rabi1, self.rabi2, duration)?,
        };
        Ok(pulse)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engines {
    pub quantum: bool,
    pub classical: bool,
}

impl Engines {
    pub const BOTH: Engines = Engines { quantum: true, classical: true };

    fn parse(s: &str) -> Option<Self> {
        let mut e = Engines { quantum: false, classical: false };
        for part in s.split(',').map(str::trim) {
            match part {
                "both" => e = Engines::BOTH,
                "quantum" => e.quantum = true,
                "classical" => e.classical = true,
                _ => return None,
            }
        }
        (e.quantum || e.classical).then_some(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: SpinSystemParams,
    pub initial: InitialAngles,
    pub pulses: Vec<PulseRequest>,
    /// RK4 step override.
    pub step: Option<f64>,
    /// Sample intervals across the first pulse.
    pub samples: usize,
    pub prefix: PathBuf,
    pub engines: Engines,
    /// Drive-free time before and after the sequence, as a fraction of the
    /// first pulse duration.
    pub padding: f64,
}

impl ExperimentConfig {
    /// Pulses as configured, without padding.
    pub fn pulse_sequence(&self) -> Result<PulseSequence> {
        let mut seq = PulseSequence::new();
        for p in &self.pulses {
            seq = seq.then(p.resolve(&self.system)?, p.delay);
        }
        Ok(seq)
    }

    /// Pulses with the configured padding on both sides.
    pub fn padded_sequence(&self) -> Result<PulseSequence> {
        let mut seq = self.pulse_sequence()?;
        let pad = self.padding * seq.entries.first().map_or(0.0, |e| e.pulse.duration);
        seq.leading_delay = pad;
        if let Some(last) = seq.entries.last_mut() {
            last.delay += pad;
        }
        Ok(seq)
    }

    pub fn integrator(&self, seq: &PulseSequence) -> IntegratorSettings {
        IntegratorSettings::per_first_pulse(seq, self.samples, self.step)
    }

    pub fn output_path(&self, suffix: &str) -> PathBuf {
        let mut name = self.prefix.clone().into_os_string();
        name.push(suffix);
        PathBuf::from(name)
    }
}

/// Parses a decimal number or a multiple of `pi`.
pub fn parse_number(raw: &str) -> Option<f64> {
    let s = raw.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s.strip_prefix('+').unwrap_or(s).trim()),
    };
    let (factor, rest) = match body.split_once('*') {
        Some((f, r)) => (f.trim().parse::<f64>().ok()?, r.trim()),
        None => (1.0, body),
    };
    let (head, divisor) = match rest.split_once('/') {
        Some((h, d)) => (h.trim(), d.trim().parse::<f64>().ok()?),
        None => (rest, 1.0),
    };
    (head == "pi").then(|| sign * factor * PI / divisor)
}

struct Entry {
    line: usize,
    value: String,
}

struct Section {
    name: String,
    line: usize,
    keys: BTreeMap<String, Entry>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.keys.remove(key)
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>> {
        let Some(e) = self.take(key) else { return Ok(None) };
        match parse_number(&e.value) {
            Some(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(CliError::Parse {
                line: e.line,
                message: format!("`{}.{key}`: not a number: `{}`", self.name, e.value),
            }),
        }
    }

    fn number_or(&mut self, key: &str, default: f64) -> Result<f64> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    fn finish(self) -> Result<()> {
        match self.keys.into_iter().next() {
            Some((key, e)) => {
                Err(CliError::Parse { line: e.line, message: format!("unknown key `{key}` in [{}]", self.name) })
            }
            None => Ok(()),
        }
    }
}

const SECTIONS: [&str; 5] = ["system", "initial", "pulse", "integrator", "output"];

fn tokenize(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| CliError::Parse { line, message: format!("malformed section header `{content}`") })?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(CliError::Parse { line, message: format!("unknown section [{name}]") });
            }
            if name != "pulse" && sections.iter().any(|s| s.name == name) {
                return Err(CliError::Parse { line, message: format!("duplicate section [{name}]") });
            }
            sections.push(Section { name: name.to_string(), line, keys: BTreeMap::new() });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::Parse { line, message: format!("expected `key = value`, found `{content}`") })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Parse { line, message: format!("expected `key = value`, found `{content}`") });
        }
        let section = sections
            .last_mut()
            .ok_or_else(|| CliError::Parse { line, message: format!("`{key}` appears before any section header") })?;
        if section.keys.insert(key.to_string(), Entry { line, value: value.to_string() }).is_some() {
            return Err(CliError::Parse { line, message: format!("duplicate key `{key}` in [{}]", section.name) });
        }
    }
    Ok(sections)
}

fn positive_or_zero(key: &str, v: f64) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(CliError::validation(key, format!("must be ≥ 0, got {v}")))
    }
}

fn parse_pulse(mut s: Section) -> Result<PulseRequest> {
    let target = s.take("target");
    let carrier = s.number("carrier")?;
    let duration = s.number("duration")?.map(|d| positive_or_zero("pulse.duration", d)).transpose()?;
    let rabi1 = positive_or_zero("pulse.rabi1", s.number_or("rabi1", DEFAULT_RABI1)?)?;
    let rabi2 = positive_or_zero("pulse.rabi2", s.number_or("rabi2", DEFAULT_RABI2)?)?;
    let delay = positive_or_zero("pulse.delay", s.number_or("delay", 0.0)?)?;
    let kind = match (target, carrier) {
        (Some(t), None) => {
            let target = t.value.parse::<Transition>().map_err(|m| CliError::Parse { line: t.line, message: m })?;
            PulseKind::Pi { target, duration }
        }
        (None, Some(carrier)) => {
            let duration = duration.ok_or_else(|| CliError::validation("pulse.duration", "required with `carrier`"))?;
            PulseKind::Explicit { carrier, duration }
        }
        (Some(_), Some(_)) => {
            return Err(CliError::validation("pulse.target", "give either `target` or `carrier`, not both"))
        }
        (None, None) => {
            return Err(CliError::Parse { line: s.line, message: "[pulse] needs `target` or `carrier`".into() })
        }
    };
    s.finish()?;
    Ok(PulseRequest { kind, rabi1, rabi2, delay })
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let sections = tokenize(text)?;
    let mut system = None;
    let mut initial = InitialAngles::default();
    let mut pulses = Vec::new();
    let mut step = None;
    let mut samples = DEFAULT_SAMPLES;
    let mut prefix = PathBuf::from("spinlab");
    let mut engines = Engines::BOTH;
    let mut padding = DEFAULT_PADDING;

    for mut s in sections {
        match s.name.as_str() {
            "system" => {
                let p = SpinSystemParams {
                    omega1: s.number_or("omega1", DEFAULT_OMEGA1)?,
                    omega2: s.number_or("omega2", DEFAULT_OMEGA2)?,
                    j_coupling: s.number_or("j", DEFAULT_J)?,
                };
                s.finish()?;
                system = Some(p);
            }
            "initial" => {
                let d = InitialAngles::default();
                initial = InitialAngles {
                    spin1: BlochAngles::new(s.number_or("theta1", d.spin1.theta)?, s.number_or("phi1", d.spin1.phi)?),
                    spin2: BlochAngles::new(s.number_or("theta2", d.spin2.theta)?, s.number_or("phi2", d.spin2.phi)?),
                };
                s.finish()?;
            }
            "pulse" => pulses.push(parse_pulse(s)?),
            "integrator" => {
                if let Some(h) = s.number("step")? {
                    if h <= 0.0 {
                        return Err(CliError::validation("integrator.step", format!("must be > 0, got {h}")));
                    }
                    step = Some(h);
                }
                if let Some(e) = s.take("samples") {
                    samples = e.value.parse::<usize>().map_err(|_| CliError::Parse {
                        line: e.line,
                        message: format!("`integrator.samples`: not an integer: `{}`", e.value),
                    })?;
                    if samples < 2 {
                        return Err(CliError::validation("integrator.samples", format!("must be ≥ 2, got {samples}")));
                    }
                }
                s.finish()?;
            }
            "output" => {
                if let Some(e) = s.take("prefix") {
                    prefix = PathBuf::from(e.value);
                }
                if let Some(e) = s.take("engines") {
                    engines = Engines::parse(&e.value).ok_or_else(|| {
                        CliError::validation(
                            "output.engines",
                            format!("expected quantum, classical or both, got `{}`", e.value),
                        )
                    })?;
                }
                padding = positive_or_zero("output.padding", s.number_or("padding", DEFAULT_PADDING)?)?;
                s.finish()?;
            }
            _ => unreachable!("section names are checked while tokenizing"),
        }
    }

    let system = system.ok_or(CliError::MissingSection("system"))?;
    if pulses.is_empty() {
        return Err(CliError::MissingSection("pulse"));
    }
    let config = ExperimentConfig { system, initial, pulses, step, samples, prefix, engines, padding };
    // resolve once so that bad pulse requests fail at parse time
    config.pulse_sequence()?;
    Ok(config)
}
