//! Carrier-frequency sweeps of the first configured pulse.

use std::fmt::Write as _;

use spinlab_core::classical::max_field;
use spinlab_core::{
    build_rotating_hamiltonian, evolve_classical_rk4, evolve_exact, observables_from_amplitudes, PulseSpec,
};

use crate::config::ExperimentConfig;
use crate::csv::{format_number, write_text};
use crate::error::{CliError, Result};

/// Classical RK4 phase per step used by sweeps. Each point only needs the
/// final i2z, so the step is coarser than for trajectories.
pub const SWEEP_STEP_PHASE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub carrier: f64,
    /// `1 − i2z/0.5` after the pulse; `None` when the engine is disabled.
    pub quantum: Option<f64>,
    pub classical: Option<f64>,
}

fn response(i2z: f64) -> f64 {
    1.0 - i2z / 0.5
}

/// Uniform grid including both ends.
pub fn carrier_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(CliError::validation("points", format!("need at least 2 points, got {n}")));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(CliError::validation("min", format!("need min < max, got [{min}, {max}]")));
    }
    let span = max - min;
    Ok((0..n).map(|k| if k + 1 == n { max } else { min + k as f64 * span / (n - 1) as f64 }).collect())
}

/// Runs the first pulse of `config` at each carrier of a uniform grid and
/// records the spin-2 flip response of the enabled engines.
pub fn sweep_frequency(config: &ExperimentConfig, min: f64, max: f64, n: usize) -> Result<Vec<SweepRow>> {
    let grid = carrier_grid(min, max, n)?;
    let first = config.pulses.first().ok_or(CliError::MissingSection("pulse"))?;
    let base = first.resolve(&config.system)?;
    let params = &config.system;
    let q0 = config.initial.quantum();
    let c0 = config.initial.classical();

    grid.into_iter()
        .map(|carrier| {
            let pulse = PulseSpec::new(carrier, base.rabi1, base.rabi2, base.duration)?;
            let quantum = if config.engines.quantum {
                let h = build_rotating_hamiltonian(params, &pulse);
                let s = evolve_exact(&q0, &h, pulse.duration)?;
                Some(response(observables_from_amplitudes(&s)?.i2z))
            } else {
                None
            };
            let classical = if config.engines.classical {
                let step = config.step.unwrap_or_else(|| SWEEP_STEP_PHASE / max_field(params, &pulse));
                let s = evolve_classical_rk4(&c0, params, &pulse, pulse.duration, step)?;
                Some(response(s.spin2.z))
            } else {
                None
            };
            Ok(SweepRow { carrier, quantum, classical })
        })
        .collect()
}

pub fn format_sweep(rows: &[SweepRow]) -> String {
    let mut out = String::from("carrier,quantum,classical\n");
    let cell = |v: Option<f64>| format_number(v.unwrap_or(f64::NAN));
    for r in rows {
        let _ = writeln!(out, "{},{},{}", format_number(r.carrier), cell(r.quantum), cell(r.classical));
    }
    out
}

pub fn write_sweep(config: &ExperimentConfig, rows: &[SweepRow]) -> Result<std::path::PathBuf> {
    let path = config.output_path("_sweep.csv");
    write_text(&path, &format_sweep(rows))?;
    Ok(path)
}

/// Carrier of the largest response; the first one wins ties.
pub fn argmax(rows: &[SweepRow], pick: impl Fn(&SweepRow) -> Option<f64>) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for r in rows {
        if let Some(v) = pick(r) {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((r.carrier, v));
            }
        }
    }
    best.map(|(c, _)| c)
}
