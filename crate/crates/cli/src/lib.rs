//! Command-line front end for the two-spin simulator: configuration files,
//! trajectory CSVs, quantum/classical comparison reports and carrier sweeps.

pub mod compare;
pub mod config;
pub mod csv;
pub mod error;
pub mod plot;
pub mod sweep;

use spinlab_core::{run_sequence, Engine, InitialState, Trajectory};

pub use compare::{run_compare, ComparisonReport, Components, Verdicts};
pub use config::{parse_config, ExperimentConfig};
pub use csv::{emit_csv, parse_csv, read_csv, CsvTrajectory};
pub use error::{CliError, Result};
pub use sweep::{sweep_frequency, SweepRow};

/// Runs the padded sequence of `config` on one engine.
pub fn run_engine(config: &ExperimentConfig, engine: Engine) -> Result<Trajectory> {
    let seq = config.padded_sequence()?;
    let settings = config.integrator(&seq);
    let initial = match engine {
        Engine::Quantum => InitialState::Quantum(config.initial.quantum()),
        Engine::Classical => InitialState::Classical(config.initial.classical()),
    };
    Ok(run_sequence(&initial, &config.system, &seq, engine, &settings)?)
}

pub fn trajectory_path(config: &ExperimentConfig, engine: Engine) -> std::path::PathBuf {
    config.output_path(&format!("_{engine}.csv"))
}

/// Runs one engine and writes its trajectory file.
pub fn run_single(config: &ExperimentConfig, engine: Engine) -> Result<Trajectory> {
    let traj = run_engine(config, engine)?;
    emit_csv(&traj, &trajectory_path(config, engine))?;
    Ok(traj)
}
