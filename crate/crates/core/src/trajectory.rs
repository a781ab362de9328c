use std::fmt;

use crate::sequence::PulseSequence;
use crate::spin::{Observables, SpinSystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Quantum,
    Classical,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Quantum => "quantum",
            Engine::Classical => "classical",
        })
    }
}

/// Time series of observables produced by one engine run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub samples: Vec<Observables>,
    pub engine: Engine,
    pub params: SpinSystemParams,
    pub sequence: PulseSequence,
}

impl Trajectory {
    pub(crate) fn start(engine: Engine, params: SpinSystemParams, sequence: PulseSequence, first: Observables) -> Self {
        Self { times: vec![0.0], samples: vec![first], engine, params, sequence }
    }

    pub(crate) fn push(&mut self, t: f64, obs: Observables) {
        self.times.push(t);
        self.samples.push(obs);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first(&self) -> &Observables {
        &self.samples[0]
    }

    pub fn last(&self) -> &Observables {
        self.samples.last().expect("trajectory always holds the initial sample")
    }

    pub fn end_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Observables)> {
        self.times.iter().copied().zip(self.samples.iter())
    }

    /// Strictly increasing times whose spacings agree within `rel_tol`.
    pub fn is_uniform(&self, rel_tol: f64) -> bool {
        if self.times.len() < 2 {
            return true;
        }
        let dt: Vec<f64> = self.times.windows(2).map(|w| w[1] - w[0]).collect();
        let reference = dt[0];
        reference > 0.0 && dt.iter().all(|d| (d - reference).abs() <= rel_tol * reference)
    }
}

/// Number of sample intervals covering `duration` at nominal spacing
/// `sample_every`, and the actual spacing. A zero-length segment has no
/// intervals.
pub(crate) fn segment_grid(duration: f64, sample_every: f64) -> (usize, f64) {
    if duration <= 0.0 {
        return (0, 0.0);
    }
    // absorb rounding in ratios that are integers up to a few ulps
    let n = ((duration / sample_every) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (n, duration / n as f64)
}
