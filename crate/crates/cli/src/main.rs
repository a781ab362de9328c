use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinlab_cli::compare::CompareOutputs;
use spinlab_cli::csv::write_text;
use spinlab_cli::sweep::{argmax, write_sweep};
use spinlab_cli::{
    parse_config, plot, run_compare, run_single, sweep_frequency, trajectory_path, CliError, ExperimentConfig,
};
use spinlab_core::{transition_frequencies, Engine, Transition};

#[derive(Parser)]
#[command(name = "spinlab", version, about = "Quantum and classical dynamics of a driven two-spin Ising molecule")]
struct Cli {
    /// Also write a gnuplot script next to the CSV output.
    #[arg(long, global = true)]
    plot_script: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the quantum engine and write `<prefix>_quantum.csv`.
    RunQuantum { config: PathBuf },
    /// Run the classical engine and write `<prefix>_classical.csv`.
    RunClassical { config: PathBuf },
    /// Run both engines and write both trajectories plus `<prefix>_report.json`.
    Compare { config: PathBuf },
    /// Sweep the carrier of the first pulse and write `<prefix>_sweep.csv`.
    Sweep {
        config: PathBuf,
        /// Lowest carrier [default: omega2 - 2J]
        #[arg(long, allow_hyphen_values = true)]
        min: Option<f64>,
        /// Highest carrier [default: omega2 + 2J]
        #[arg(long, allow_hyphen_values = true)]
        max: Option<f64>,
        #[arg(long, default_value_t = 81)]
        points: usize,
    },
    /// Print the four transition frequencies.
    Resonances { config: PathBuf },
}

fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), source: e })?;
    parse_config(&text)
}

fn write_plot(config: &ExperimentConfig, files: &[PathBuf]) -> Result<(), CliError> {
    let refs: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
    let path = config.output_path(".gp");
    write_text(&path, &plot::gnuplot_script(&refs))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_one(config: &ExperimentConfig, engine: Engine, plot: bool) -> Result<(), CliError> {
    let traj = run_single(config, engine)?;
    let path = trajectory_path(config, engine);
    let f = traj.last();
    println!("wrote {} ({} samples)", path.display(), traj.len());
    println!("final: i1 = ({:.6}, {:.6}, {:.6})  i2 = ({:.6}, {:.6}, {:.6})", f.i1x, f.i1y, f.i1z, f.i2x, f.i2y, f.i2z);
    if let Some(c) = f.concurrence {
        println!("final concurrence: {c:.9}");
    }
    if plot {
        write_plot(config, &[path])?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::RunQuantum { config } => run_one(&load(&config)?, Engine::Quantum, cli.plot_script),
        Command::RunClassical { config } => run_one(&load(&config)?, Engine::Classical, cli.plot_script),
        Command::Compare { config } => {
            let config = load(&config)?;
            let report = run_compare(&config)?;
            let out = CompareOutputs::for_config(&config);
            print!("{}", report.to_json());
            println!(
                "wrote {}, {}, {}",
                out.quantum_csv.display(),
                out.classical_csv.display(),
                out.report_json.display()
            );
            if cli.plot_script {
                write_plot(&config, &[out.quantum_csv, out.classical_csv])?;
            }
            Ok(())
        }
        Command::Sweep { config, min, max, points } => {
            let config = load(&config)?;
            let (w2, j) = (config.system.omega2, config.system.j_coupling.abs());
            let rows = sweep_frequency(&config, min.unwrap_or(w2 - 2.0 * j), max.unwrap_or(w2 + 2.0 * j), points)?;
            let path = write_sweep(&config, &rows)?;
            println!("wrote {} ({} carriers)", path.display(), rows.len());
            if let Some(c) = argmax(&rows, |r| r.quantum) {
                println!("quantum response peaks at carrier {c}");
            }
            if let Some(c) = argmax(&rows, |r| r.classical) {
                println!("classical response peaks at carrier {c}");
            }
            Ok(())
        }
        Command::Resonances { config } => {
            let config = load(&config)?;
            let freqs = transition_frequencies(&config.system);
            println!("{:<4} {:>14}  levels", "name", "frequency");
            for t in Transition::ALL {
                println!("{:<4} {:>14}  {}", t.to_string(), freqs.get(t), t.describe());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
