//! Acceptance checks for the shipped experiment. Prints one PASS/FAIL line
//! per check and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinlab_cli::sweep::argmax;
use spinlab_cli::{parse_config, run_compare, sweep_frequency, ExperimentConfig, Result};
use spinlab_core::{
    build_rotating_hamiltonian, evolve_exact, evolve_rk4, pi_pulse, rotating_energy, ClassicalState, PulseSpec,
    QuantumState, SpinSystemParams, SpinVector, Transition,
};

const FIG12: &str = include_str!("../../../experiments/fig12.experiment");

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { name, pass, detail }
}

fn config(dir: &tempfile::TempDir) -> ExperimentConfig {
    let mut c = parse_config(FIG12).expect("shipped experiment parses");
    c.prefix = dir.path().join("fig12");
    c
}

fn max_by(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn run() -> Result<Vec<Outcome>> {
    let dir = tempfile::tempdir().expect("temp dir");
    let cfg = config(&dir);
    let params = cfg.system;
    let seq = cfg.padded_sequence()?;
    let pulse = seq.entries[0].pulse;
    let tau = pulse.duration;
    let lead = seq.leading_delay;

    let report = run_compare(&cfg)?;
    let quantum = spinlab_cli::read_csv(&cfg.output_path("_quantum.csv"))?;
    let classical = spinlab_cli::read_csv(&cfg.output_path("_classical.csv"))?;
    let qs = &quantum.samples;
    let cs = &classical.samples;
    let mut out = Vec::new();

    // 1
    let qf = report.quantum_final;
    let conc = report.final_concurrence.unwrap_or(f64::NAN);
    out.push(outcome(
        "1 Bell state: final |components| <= 5e-3, concurrence >= 0.995",
        qf.max_abs() <= 5e-3 && conc >= 0.995,
        format!("max |component| = {:.3e}, concurrence = {conc:.10}", qf.max_abs()),
    ));

    // 2
    let (k_max, i2y_max) =
        qs.iter().enumerate().fold((0, f64::MIN), |b, (k, o)| if o.i2y > b.1 { (k, o.i2y) } else { b });
    let t_rel = (quantum.times[k_max] - lead) / tau;
    out.push(outcome(
        "2 mid-pulse marker: max i2y = 0.25 +- 0.01 at t = tau/2 +- 0.02 tau",
        (i2y_max - 0.25).abs() <= 0.01 && (t_rel - 0.5).abs() <= 0.02,
        format!("max i2y = {i2y_max:.5} at t/tau = {t_rel:.4}"),
    ));

    // 3
    // the pulse window; after it the residual transverse amplitude beats at 2J
    let window = |t: f64| t >= lead - 1e-9 * tau && t <= lead + tau * (1.0 + 1e-9);
    let pulse_q: Vec<_> = quantum.times.iter().zip(qs).filter(|(t, _)| window(**t)).map(|(_, o)| *o).collect();
    let rise = |f: &dyn Fn(&spinlab_core::Observables) -> f64| max_by(pulse_q.windows(2).map(|w| f(&w[1]) - f(&w[0])));
    let i2z_rise = rise(&|o| o.i2z);
    let tr_rise = rise(&|o| o.transverse1());
    let starts = (pulse_q[0].i2z - 0.5).abs() < 1e-12 && (pulse_q[0].transverse1() - 0.5).abs() < 1e-12;
    out.push(outcome(
        "3 monotonic decay of i2z and spin-1 transverse amplitude during the pulse (slack 1e-4)",
        starts && i2z_rise <= 1e-4 && tr_rise <= 1e-4,
        format!("largest rise over {} samples: i2z {i2z_rise:.2e}, transverse {tr_rise:.2e}", pulse_q.len()),
    ));

    // 4
    let c_i2z = max_by(cs.iter().map(|o| (o.i2z - 0.5).abs()));
    let c_tr = max_by(cs.iter().map(|o| (o.transverse1() - 0.5).abs()));
    out.push(outcome(
        "4 classical null: max |i2z - 0.5| <= 1e-4, transverse within 0.5 +- 0.01",
        c_i2z <= 1e-4 && c_tr <= 0.01,
        format!("max |i2z - 0.5| = {c_i2z:.3e}, max |transverse - 0.5| = {c_tr:.3e}"),
    ));

    // 5
    out.push(outcome(
        "5 quantum-classical divergence >= 0.45 for i2z and spin-1 transverse amplitude",
        report.final_i2z_divergence >= 0.45 && report.final_transverse1_divergence >= 0.45,
        format!("i2z {:.6}, transverse {:.6}", report.final_i2z_divergence, report.final_transverse1_divergence),
    ));

    // 6
    let h = build_rotating_hamiltonian(&params, &pulse);
    let q0 = cfg.initial.quantum();
    let full = evolve_rk4(&q0, &h, tau, h.default_step())?.max_abs_diff(&evolve_exact(&q0, &h, tau)?);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p =
            SpinSystemParams::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0), rng.gen_range(-10.0..10.0))?;
        let pl = PulseSpec::new(rng.gen_range(-50.0..50.0), rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0), 1.0)?;
        let amps: [Complex64; 4] =
            std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let s = QuantumState::new(amps.map(|a| a / n))?;
        let t = rng.gen_range(0.1..5.0);
        let hr = build_rotating_hamiltonian(&p, &pl);
        worst = worst.max(evolve_rk4(&s, &hr, t, hr.default_step())?.max_abs_diff(&evolve_exact(&s, &hr, t)?));
    }
    out.push(outcome(
        "6 RK4 vs spectral propagator <= 1e-8 (Bell run and 100 random instances)",
        full <= 1e-8 && worst <= 1e-8,
        format!("Bell run {full:.2e}, random worst {worst:.2e}"),
    ));

    // 7
    let rp = SpinSystemParams::new(40.0, 12.0, 1.5)?;
    let rabi = 0.7;
    let mut rabi_err = 0.0f64;
    for i in 0..10 {
        let detuning = -3.0 + 6.0 * i as f64 / 9.0;
        let pl = PulseSpec::new(rp.omega2 - rp.j_coupling - detuning, 0.0, rabi, 1.0)?;
        let hr = build_rotating_hamiltonian(&rp, &pl);
        for k in 0..10 {
            let t = 0.5 + 2.0 * k as f64;
            let s = evolve_rk4(&QuantumState::basis(1, 0), &hr, t, hr.default_step())?;
            let w2 = rabi * rabi + detuning * detuning;
            let analytic = rabi * rabi / w2 * (w2.sqrt() * t / 2.0).sin().powi(2);
            rabi_err = rabi_err.max((s.c11().norm_sqr() - analytic).abs());
        }
    }
    out.push(outcome(
        "7 generalized Rabi formula on a 10x10 (detuning, duration) grid within 1e-10",
        rabi_err <= 1e-10,
        format!("max population error {rabi_err:.2e}"),
    ));

    // 8
    let norm_drift = max_by(qs.iter().map(|o| (o.norm - 1.0).abs()));
    let len = |v: SpinVector| (v.length() - 0.5).abs();
    let spins = |o: &spinlab_core::Observables| {
        ClassicalState::new(SpinVector::new(o.i1x, o.i1y, o.i1z), SpinVector::new(o.i2x, o.i2y, o.i2z))
    };
    let len_drift = max_by(cs.iter().map(|o| {
        let s = spins(o);
        len(s.spin1).max(len(s.spin2))
    }));
    let in_pulse: Vec<ClassicalState> =
        classical.times.iter().zip(cs).filter(|(t, _)| window(**t)).map(|(_, o)| spins(o)).collect();
    let e0 = rotating_energy(&in_pulse[0], &params, &pulse);
    let e_drift = max_by(in_pulse.iter().map(|s| (rotating_energy(s, &params, &pulse) - e0).abs())) / e0.abs();
    out.push(outcome(
        "8 conservation: norm drift <= 1e-9, spin length <= 1e-6, energy <= 1e-8 relative",
        norm_drift <= 1e-9 && len_drift <= 1e-6 && e_drift <= 1e-8,
        format!("norm {norm_drift:.2e}, length {len_drift:.2e}, energy {e_drift:.2e} over {} samples", in_pulse.len()),
    ));

    // 9
    let (w2, j) = (params.omega2, params.j_coupling);
    let rows = sweep_frequency(&cfg, w2 - 2.0 * j, w2 + 2.0 * j, 81)?;
    let value = |c: f64, f: &dyn Fn(&spinlab_cli::SweepRow) -> Option<f64>| {
        rows.iter().find(|r| r.carrier == c).and_then(f).unwrap_or(f64::NAN)
    };
    let c_peak = argmax(&rows, |r| r.classical).unwrap_or(f64::NAN);
    let nearest = rows.iter().map(|r| r.carrier).fold(f64::NAN, |b, c| {
        if b.is_nan() || (c - w2).abs() < (b - w2).abs() {
            c
        } else {
            b
        }
    });
    out.push(outcome(
        "9a classical sweep response maximal at the grid point nearest omega2",
        c_peak == nearest,
        format!("peak at {c_peak}, response {:.6}", value(c_peak, &|r| r.classical)),
    ));
    let q_peak = argmax(&rows, |r| r.quantum).unwrap_or(f64::NAN);
    out.push(outcome(
        "9b quantum sweep response maximal at omega2 - J",
        q_peak == w2 - j,
        format!(
            "peak at {q_peak}; response at {} = {:.16}, at {} = {:.16}",
            w2 - j,
            value(w2 - j, &|r| r.quantum),
            w2 + j,
            value(w2 + j, &|r| r.quantum)
        ),
    ));

    // 10
    let pp = pi_pulse(&params, Transition::B1, 0.0, pulse.rabi2)?;
    let hp = build_rotating_hamiltonian(&params, &pp);
    let s = evolve_rk4(&QuantumState::basis(1, 0), &hp, pp.duration, hp.default_step())?;
    let common = Complex64::from_polar(1.0, -hp.diag[2] * pp.duration);
    let expected = QuantumState::from_amplitudes_unchecked([
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::i() * common,
    ]);
    let phase_err = s.max_abs_diff(&expected);
    out.push(outcome(
        "10 resonant pi-pulse with rabi1 = 0 maps |10> to i|11> within 1e-9",
        phase_err <= 1e-9,
        format!("max amplitude error {phase_err:.2e}"),
    ));

    Ok(out)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let outcomes = match run() {
        Ok(o) => o,
        Err(e) => {
            println!("FAIL acceptance run aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    for o in &outcomes {
        println!("{} {} [{}]", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!("{} passed, {failed} failed in {:.1}s", outcomes.len() - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
