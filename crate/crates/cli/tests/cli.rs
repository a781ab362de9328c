use std::fs;
use std::path::Path;
use std::process::Command;

use spinlab_cli::compare::{CompareOutputs, ComparisonReport};
use spinlab_cli::csv::{format_csv, HEADER};
use spinlab_cli::{emit_csv, parse_config, read_csv, run_compare, run_single, CliError, ExperimentConfig};
use spinlab_core::{product_state, simulate_quantum, BlochAngles, Engine, PulseSpec, SpinSystemParams};

const FIG12: &str = include_str!("../../../experiments/fig12.experiment");

fn fig12_in(dir: &Path) -> ExperimentConfig {
    let mut c = parse_config(FIG12).unwrap();
    c.prefix = dir.join("fig12");
    c
}

fn custom(dir: &Path, body: &str) -> ExperimentConfig {
    let mut c = parse_config(body).unwrap();
    c.prefix = dir.join("run");
    c
}

#[test]
fn compare_writes_consistent_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fig12_in(dir.path());
    let report = run_compare(&cfg).unwrap();
    let out = CompareOutputs::for_config(&cfg);

    let q = read_csv(&out.quantum_csv).unwrap();
    let c = read_csv(&out.classical_csv).unwrap();
    assert_eq!(q.times, c.times);
    // 100 padding + 1000 pulse + 100 padding intervals, both ends sampled
    assert_eq!(q.times.len(), 1201);
    assert!(q.times.windows(2).all(|w| w[1] > w[0]));

    let rederived = ComparisonReport::from_samples(&q.samples, &c.samples).unwrap();
    assert_eq!(rederived, report);
    let stored: ComparisonReport = serde_json::from_str(&fs::read_to_string(&out.report_json).unwrap()).unwrap();
    assert_eq!(stored, report);

    let v = report.verdicts;
    assert!(v.quantum_vanishing && v.classical_null && v.divergence);
    assert!(report.quantum_final.i2z.abs() <= 5e-3);
    assert!(report.classical_final.i2z >= 0.499);
    assert!(report.max_divergence.to_array().iter().all(|d| *d >= 0.0));
}

#[test]
fn classical_file_has_nan_concurrence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = custom(dir.path(), "[system]\n[pulse]\ntarget = B1\nduration = 3\n");
    run_single(&cfg, Engine::Classical).unwrap();
    let text = fs::read_to_string(cfg.output_path("_classical.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(fields[8], "nan");
        assert!((fields[7].parse::<f64>().unwrap() - 0.5).abs() < 1e-9);
    }
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let body = "[system]\nj = 5\n[pulse]\ntarget = B1\nduration = 20\n[integrator]\nsamples = 200\n";
    for d in [&a, &b] {
        run_compare(&custom(d.path(), body)).unwrap();
    }
    for name in ["run_quantum.csv", "run_classical.csv", "run_report.json"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name} differs between runs");
    }
}

#[test]
fn undriven_engines_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = custom(
        dir.path(),
        "[system]\n[pulse]\ncarrier = 95\nduration = 50\nrabi1 = 0\nrabi2 = 0\n[integrator]\nsamples = 100\n",
    );
    let report = run_compare(&cfg).unwrap();
    assert!(report.max_divergence.to_array().iter().all(|d| *d <= 1e-9), "{:?}", report.max_divergence);
    assert!(!report.verdicts.divergence);
    let q = read_csv(&cfg.output_path("_quantum.csv")).unwrap();
    assert!(q.samples.iter().all(|o| (o.i2z - 0.5).abs() < 1e-12));
}

#[test]
fn uncoupled_engines_share_nutation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = custom(
        dir.path(),
        "[system]\nj = 0\n[pulse]\ncarrier = 100\nduration = 157.07963267948966\n[integrator]\nsamples = 500\n",
    );
    let report = run_compare(&cfg).unwrap();
    assert!(report.max_divergence.i2z <= 1e-6, "{}", report.max_divergence.i2z);
    assert!(report.max_divergence.max_abs() <= 1e-6);
    assert!(!report.verdicts.spin2_divergence);
    // a full flip of spin 2 happened in both pictures
    assert!(report.quantum_final.i2z < -0.49);
}

#[test]
fn compare_needs_both_engines() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = custom(dir.path(), "[system]\n[pulse]\ntarget = B1\n[output]\nengines = quantum\n");
    assert!(matches!(run_compare(&cfg), Err(CliError::Validation { .. })));
}

#[test]
fn csv_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let p = SpinSystemParams::new(200.0, 100.0, 5.0).unwrap();
    let s = product_state(BlochAngles::new(1.1, -0.4), BlochAngles::new(0.3, 2.0));
    let traj = simulate_quantum(&s, &p, &PulseSpec::new(95.0, 0.1, 0.02, 2.0).unwrap(), 1e-3, 0.05).unwrap();
    let path = dir.path().join("t.csv");
    emit_csv(&traj, &path).unwrap();
    let back = read_csv(&path).unwrap();
    assert_eq!(back.times, traj.times);
    assert_eq!(back.samples, traj.samples);

    let single = simulate_quantum(&s, &p, &PulseSpec::new(95.0, 0.1, 0.02, 0.0).unwrap(), 1e-3, 0.05).unwrap();
    assert_eq!(format_csv(&single).lines().count(), 2);
}

fn spinlab(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_spinlab")).current_dir(dir).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("ok.experiment"), "[system]\n[pulse]\ntarget = B1\nduration = 2\n").unwrap();
    fs::write(d.join("bad.experiment"), "[system]\n[pulse]\ncarrier = 95\nduration = -1\n").unwrap();
    fs::write(
        d.join("coarse.experiment"),
        "[system]\n[pulse]\ntarget = B1\nduration = 20\n[integrator]\nstep = 1\nsamples = 2\n",
    )
    .unwrap();

    let out = spinlab(d, &["resonances", "ok.experiment"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("B1") && table.contains("95"));

    let out = spinlab(d, &["run-quantum", "ok.experiment", "--plot-script"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(d.join("spinlab_quantum.csv").exists());
    assert!(fs::read_to_string(d.join("spinlab.gp")).unwrap().contains("spinlab_quantum.csv"));

    assert_eq!(spinlab(d, &["compare", "bad.experiment"]).status.code(), Some(2));
    assert_eq!(spinlab(d, &["run-quantum", "missing.experiment"]).status.code(), Some(4));
    assert_eq!(spinlab(d, &["run-quantum", "coarse.experiment"]).status.code(), Some(3));
    assert_eq!(
        spinlab(d, &["sweep", "ok.experiment", "--min", "100", "--max", "100", "--points", "2"]).status.code(),
        Some(2)
    );

    let out = spinlab(d, &["sweep", "ok.experiment", "--points", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let sweep = fs::read_to_string(d.join("spinlab_sweep.csv")).unwrap();
    assert_eq!(sweep.lines().next(), Some("carrier,quantum,classical"));
    assert_eq!(sweep.lines().count(), 6);
}
