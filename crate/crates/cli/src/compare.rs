//! Side-by-side quantum and classical runs.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use spinlab_core::{Engine, Observables};

use crate::config::ExperimentConfig;
use crate::csv::{emit_csv, write_text};
use crate::error::{CliError, Result};
use crate::run_engine;

/// Largest final |component| still counted as vanished magnetization.
pub const VANISHING_COMPONENT: f64 = 5e-3;
pub const MIN_BELL_CONCURRENCE: f64 = 0.995;
/// Largest excursion of classical i2z from its initial value.
pub const CLASSICAL_I2Z_DRIFT: f64 = 1e-4;
/// Largest excursion of the classical spin-1 transverse amplitude.
pub const CLASSICAL_TRANSVERSE_DRIFT: f64 = 0.01;
pub const DIVERGENCE_THRESHOLD: f64 = 0.45;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Components {
    pub i1x: f64,
    pub i1y: f64,
    pub i1z: f64,
    pub i2x: f64,
    pub i2y: f64,
    pub i2z: f64,
}

impl Components {
    pub fn of(o: &Observables) -> Self {
        Self { i1x: o.i1x, i1y: o.i1y, i1z: o.i1z, i2x: o.i2x, i2y: o.i2y, i2z: o.i2z }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.i1x, self.i1y, self.i1z, self.i2x, self.i2y, self.i2z]
    }

    fn from_array(a: [f64; 6]) -> Self {
        Self { i1x: a[0], i1y: a[1], i1z: a[2], i2x: a[3], i2y: a[4], i2z: a[5] }
    }

    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    /// Every quantum component ends near zero with an entangled final state.
    pub quantum_vanishing: bool,
    /// Classical spin 2 stays put and spin 1 keeps its transverse amplitude.
    pub classical_null: bool,
    pub spin2_divergence: bool,
    pub spin1_divergence: bool,
    /// Both spins diverge.
    pub divergence: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub samples: usize,
    pub quantum_final: Components,
    pub classical_final: Components,
    /// Max over the time grid of |classical − quantum| per component.
    pub max_divergence: Components,
    pub final_concurrence: Option<f64>,
    /// Spin-1 transverse amplitude at the end of the quantum run.
    pub quantum_transverse1: f64,
    pub classical_transverse1: f64,
    pub classical_max_i2z_drift: f64,
    pub classical_max_transverse1_drift: f64,
    /// |i2z classical − i2z quantum| at the end.
    pub final_i2z_divergence: f64,
    /// |transverse1 classical − transverse1 quantum| at the end.
    pub final_transverse1_divergence: f64,
    pub verdicts: Verdicts,
}

impl ComparisonReport {
    /// Builds the report from two sample series on the same time grid.
    pub fn from_samples(quantum: &[Observables], classical: &[Observables]) -> Result<Self> {
        if quantum.len() != classical.len() || quantum.is_empty() {
            return Err(CliError::validation(
                "samples",
                format!("engines produced {} and {} samples", quantum.len(), classical.len()),
            ));
        }
        let c0 = &classical[0];
        let (qf, cf) = (quantum.last().unwrap(), classical.last().unwrap());

        let mut max_div = [0.0f64; 6];
        for (q, c) in quantum.iter().zip(classical) {
            for (m, (a, b)) in max_div.iter_mut().zip(q.components().iter().zip(c.components())) {
                *m = m.max((a - b).abs());
            }
        }
        let classical_max_i2z_drift = classical.iter().fold(0.0f64, |m, c| m.max((c.i2z - c0.i2z).abs()));
        let classical_max_transverse1_drift =
            classical.iter().fold(0.0f64, |m, c| m.max((c.transverse1() - c0.transverse1()).abs()));
        let final_concurrence = qf.concurrence;
        let final_i2z_divergence = (cf.i2z - qf.i2z).abs();
        let final_transverse1_divergence = (cf.transverse1() - qf.transverse1()).abs();

        let spin2_divergence = final_i2z_divergence >= DIVERGENCE_THRESHOLD;
        let spin1_divergence = final_transverse1_divergence >= DIVERGENCE_THRESHOLD;
        let verdicts = Verdicts {
            quantum_vanishing: Components::of(qf).max_abs() <= VANISHING_COMPONENT
                && final_concurrence.is_some_and(|c| c >= MIN_BELL_CONCURRENCE),
            classical_null: classical_max_i2z_drift <= CLASSICAL_I2Z_DRIFT
                && classical_max_transverse1_drift <= CLASSICAL_TRANSVERSE_DRIFT,
            spin2_divergence,
            spin1_divergence,
            divergence: spin2_divergence && spin1_divergence,
        };
        Ok(Self {
            samples: quantum.len(),
            quantum_final: Components::of(qf),
            classical_final: Components::of(cf),
            max_divergence: Components::from_array(max_div),
            final_concurrence,
            quantum_transverse1: qf.transverse1(),
            classical_transverse1: cf.transverse1(),
            classical_max_i2z_drift,
            classical_max_transverse1_drift,
            final_i2z_divergence,
            final_transverse1_divergence,
            verdicts,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Files written by [`run_compare`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareOutputs {
    pub quantum_csv: PathBuf,
    pub classical_csv: PathBuf,
    pub report_json: PathBuf,
}

impl CompareOutputs {
    pub fn for_config(config: &ExperimentConfig) -> Self {
        Self {
            quantum_csv: crate::trajectory_path(config, Engine::Quantum),
            classical_csv: crate::trajectory_path(config, Engine::Classical),
            report_json: config.output_path("_report.json"),
        }
    }
}

/// Runs both engines on the same grid, writes their trajectories and the
/// report, and returns the report.
pub fn run_compare(config: &ExperimentConfig) -> Result<ComparisonReport> {
    if !(config.engines.quantum && config.engines.classical) {
        return Err(CliError::validation("output.engines", "compare needs both engines"));
    }
    let (quantum, classical) = std::thread::scope(|s| {
        let q = s.spawn(|| run_engine(config, Engine::Quantum));
        let c = run_engine(config, Engine::Classical);
        (q.join().expect("quantum engine thread panicked"), c)
    });
    let (quantum, classical) = (quantum?, classical?);
    if quantum.times != classical.times {
        return Err(CliError::validation("integrator", "engines produced different time grids"));
    }
    let report = ComparisonReport::from_samples(&quantum.samples, &classical.samples)?;
    let out = CompareOutputs::for_config(config);
    emit_csv(&quantum, &out.quantum_csv)?;
    emit_csv(&classical, &out.classical_csv)?;
    write_text(&out.report_json, &report.to_json())?;
    Ok(report)
}
