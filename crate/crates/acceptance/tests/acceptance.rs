//! Acceptance criteria: one line per criterion, exit status nonzero on any
//! unexpected result.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use gravcat::aqt::{self, ComparatorSetup, Dephasing, DephasingBasis};
use gravcat::cli::{self, Args, Outcome as CliOutcome, Scenario};
use gravcat::ggp::{self, GgpProblem};
use gravcat::overlap::overlap_coefficients;
use gravcat::params::{self, CODATA};
use gravcat::qubitpair::{QubitPairModel, TwoQubitState, EE, EG, GE, GG};
use gravcat::rotor::{self, IntegratorOptions, RotorParams, RotorState};
use gravcat::semiclassical::{
    schrodinger_splitting_oracle, semiclassical_mode, wkb_energy_split, DoubleWell, FdGrid, ModeOptions,
};
use gravcat::twomode::{self, BipartiteEvolver};
use gravcat_acceptance::{self as oracle, rel, run_criterion, Checks, Criterion, Outcome};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn random_state(rng: &mut ChaCha8Rng) -> TwoQubitState<f64> {
    loop {
        let amps = [0; 4].map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        if let Ok(s) = TwoQubitState::normalized(amps) {
            return s;
        }
    }
}

fn spectrum_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_oracle, mut worst_closed) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (w, u): (f64, f64) = (rng.random_range(1e-3..10.0), rng.random_range(1e-3..10.0));
        let m = QubitPairModel::new(w, u).unwrap();
        let wp = (w * w + u * u).sqrt();
        let want = [-wp, -u, u, wp];
        let got = oracle::eigenvalues(&m.hamiltonian_matrix());
        let closed = m.eigenvalues();
        for k in 0..4 {
            worst_oracle = worst_oracle.max((got[k] - want[k]).abs() / wp);
            worst_closed = worst_closed.max((closed[k] - want[k]).abs() / wp);
        }
    }
    let mut c = Checks::default();
    c.check("dense eigensolver vs set, rel", worst_oracle < 1e-10, format!("{worst_oracle:.1e}"));
    c.check("closed form vs set, rel", worst_closed < 1e-10, format!("{worst_closed:.1e}"));
    c.finish()
}

fn evolution_vs_expm() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = QubitPairModel::new(rng.random_range(0.0..5.0), rng.random_range(1e-2..5.0)).unwrap();
        let h = m.hamiltonian_matrix();
        for k in 0..=40 {
            let t = 25.0 * k as f64 / m.omega_prime();
            let op = m.evolution_operator(t);
            let ex = oracle::expm(&h, t);
            for i in 0..4 {
                for j in 0..4 {
                    worst = worst.max((op[[i, j]] - ex[(i, j)]).norm());
                }
            }
        }
    }
    let mut c = Checks::default();
    c.check("max entry deviation over w't in [0, 1000]", worst < 1e-9, format!("{worst:.1e}"));
    c.finish()
}

fn purity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let m = QubitPairModel::new(rng.random_range(0.0..5.0), rng.random_range(1e-2..5.0)).unwrap();
        for k in 0..200 {
            let t = 0.05 * k as f64;
            let psi = m.evolve(&TwoQubitState::basis(EE), t).unwrap();
            worst = worst.max((m.purity_deficit_closed_form(t) - oracle::purity_deficit(&psi.amps)).abs());
        }
    }
    let residual = |u: f64| {
        let g = QubitPairModel::new(1.0, u).unwrap().ground_state();
        let limit = u * u / 2.0;
        (oracle::purity_deficit(&g.amps) - limit).abs() / limit
    };
    let (r2, r3) = (residual(1e-2), residual(1e-3));
    let order = (r2 / r3).log10();
    let mut c = Checks::default();
    c.check("closed form vs partial trace", worst < 1e-10, format!("{worst:.1e}"));
    c.check("ground limit rel residual at 1e-3", r3 < 1e-5, format!("{r3:.1e}"));
    c.check("convergence order", (order - 2.0).abs() < 0.05, format!("{order:.4}"));
    c.finish()
}

fn mass_scale() -> Outcome {
    let period = params::rabi_period(1e11 * CODATA.amu, 1e-6, 1e-6).unwrap();
    let m60 = params::mass_for_period(60.0, 1e-6, 1e-6).unwrap() / CODATA.amu;
    let mut c = Checks::default();
    c.check("period at 1e11 amu in [1e2, 1e4] s", (1e2..=1e4).contains(&period), format!("{period:.1} s"));
    c.check("mass for 60 s in [1e11, 1e12] amu", (1e11..=1e12).contains(&m60), format!("{m60:.3e} amu"));
    c.finish()
}

fn overlap_asymptotics() -> Outcome {
    let l = 10.0;
    let well = DoubleWell::quartic(1.0, 1.0, l).unwrap();
    let (mode, _) = semiclassical_mode(&well, ModeOptions::default()).unwrap();
    let tol_diff = 2.0 / well.semiclassical_parameter();
    let (mut sum_err, mut diff_err) = (0.0f64, 0.0f64);
    let (mut sum_ratio, mut diff_ratio) = (Vec::new(), Vec::new());
    for z in [1.0f64, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        let d = z.sqrt();
        let q = overlap_coefficients(&mode, d).unwrap();
        let sum = q.gamma_plus + q.gamma_minus;
        let diff = q.gamma_plus - q.gamma_minus;
        let sum_form = (1.0 / std::f64::consts::PI).sqrt() * (z / 8.0).exp() * oracle::bessel_k0(z / 8.0);
        let diff_form = 2.0 / (d * d + l * l).sqrt();
        sum_err = sum_err.max(rel(sum, sum_form));
        diff_err = diff_err.max(rel(diff, diff_form));
        sum_ratio.push(sum_form / sum);
        diff_ratio.push(diff_form / diff);
    }
    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(0.0, f64::max);
        format!("form/quadrature {lo:.3}..{hi:.3}")
    };
    let mut c = Checks::default();
    c.check("sum within 1%", sum_err < 1e-2, format!("{sum_err:.3} ({})", span(&sum_ratio)));
    c.check(
        &format!("difference within {tol_diff}"),
        diff_err < tol_diff,
        format!("{diff_err:.3} ({})", span(&diff_ratio)),
    );
    c.finish()
}

fn wkb_vs_oracle() -> Outcome {
    let mut c = Checks::default();
    let (mut worst_log, mut worst_validity) = (0.0f64, 0.0f64);
    let (mut mono_w, mut mono_o) = (true, true);
    let mut prev: Option<(f64, f64)> = None;
    for l in [8.0f64, 9.0, 10.0, 11.0, 12.0] {
        let well = DoubleWell::quartic(1.0, 1.0, l).unwrap();
        let w = wkb_energy_split(&well).unwrap();
        let o = schrodinger_splitting_oracle(&well, FdGrid::default()).unwrap();
        worst_log = worst_log.max((w / o.splitting).ln().abs());
        worst_validity = worst_validity.max(o.validity_ratio);
        if let Some((pw, po)) = prev {
            mono_w &= w < pw;
            mono_o &= o.splitting < po;
        }
        prev = Some((w, o.splitting));
    }
    c.check("max |log ratio|", worst_log < 1.0, format!("{worst_log:.3}"));
    c.check("WKB monotone", mono_w, mono_w);
    c.check("oracle monotone", mono_o, mono_o);
    c.check("max validity ratio", worst_validity < 1e-2, format!("{worst_validity:.1e}"));
    c.finish()
}

fn ggp_limits() -> Outcome {
    let mut c = Checks::default();
    let h = GgpProblem::harmonic(1.0f64, 1.0, 0.0, 0.0, 1.0, 0.5).unwrap();
    let grid = h.grid(256, 10.0).unwrap();
    let mu0 = ggp::solve_ground_state(&h, &grid).unwrap().mu;
    let mu1 = ggp::solve_first_excited(&h, &grid).unwrap().mu;
    c.check("mu0 vs 1/2", rel(mu0, 0.5) < 1e-4, format!("{:.1e}", rel(mu0, 0.5)));
    c.check("mu1 vs 3/2", rel(mu1, 1.5) < 1e-4, format!("{:.1e}", rel(mu1, 1.5)));

    let well = DoubleWell::quartic(1.0, 1.0, 8.0).unwrap();
    let p = GgpProblem::<f64>::from_well(&well, 0.01, 0.01, 11.0, 0.5).unwrap();
    let base = p.grid(256, 6.0).unwrap();
    let a = ggp::solve_ground_state(&p, &base).unwrap();
    let b = ggp::solve_first_excited(&p, &base).unwrap();
    // Non-increasing up to rounding of the energy itself.
    let monotone = [&a, &b]
        .iter()
        .all(|s| s.energy_trace.windows(2).all(|w| w[1] <= w[0] + 64.0 * f64::EPSILON * w[0].abs().max(1.0)));
    c.check("energy traces monotone", monotone, format!("{} + {} steps", a.energy_trace.len(), b.energy_trace.len()));
    let finer = ggp::solve_ground_state(&p, &p.grid(512, 6.0).unwrap()).unwrap().mu;
    let wider = ggp::solve_ground_state(&p, &p.grid(512, 12.0).unwrap()).unwrap().mu;
    let dmu = rel(finer, a.mu).max(rel(wider, a.mu));
    c.check("mu under refinement", dmu < 1e-5, format!("{dmu:.1e}"));
    c.finish()
}

fn n1_reduction() -> Outcome {
    let mut c = Checks::default();
    let q = QubitPairModel::new(1.3, 0.25).unwrap();
    let p = twomode::from_qubit_pair(&q).unwrap();
    let ev = BipartiteEvolver::new(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut starts: Vec<TwoQubitState<f64>> = [EE, GG, EG, GE].map(TwoQubitState::basis).to_vec();
    starts.push(random_state(&mut rng));
    let mut worst = 0.0f64;
    for psi in &starts {
        let s0 = twomode::from_qubit_state(psi).unwrap();
        for k in 0..=500 {
            let t = 2.0 * k as f64 / q.omega_prime();
            let a = twomode::from_qubit_state(&q.evolve(psi, t).unwrap()).unwrap();
            let b = ev.evolve(&s0, t).unwrap();
            for (x, y) in a.amps.iter().zip(&b.amps) {
                worst = worst.max((x - y).norm());
            }
        }
    }
    c.check("time series vs qubit pair", worst < 1e-9, format!("{worst:.1e}"));
    let audit = twomode::normalization_audit().unwrap();
    for (term, label) in [("Sz splitting", "omega factor"), ("N_R-N_L per Sx", "imbalance per Sx")] {
        let r = audit.entry(1, term).map(|e| e.ratio());
        let ok = r.is_some_and(|r| (r - 0.5).abs() < 1e-12);
        c.check(&format!("audit {label}"), ok, format!("{:.6}", r.unwrap_or(f64::NAN)));
    }
    c.finish()
}

/// Counts full swings of energy into rotor 1 and back: the running maximum
/// of `h1` passes `hi` and `h1` later drops below `lo`.
fn exchange_cycles(h1: &[f64], hi: f64, lo: f64) -> usize {
    let (mut cycles, mut filled) = (0, false);
    for &v in h1 {
        if !filled && v > hi {
            filled = true;
        } else if filled && v < lo {
            filled = false;
            cycles += 1;
        }
    }
    cycles
}

fn rotor_modes() -> Outcome {
    let mut c = Checks::default();
    let mut worst_beat = 0.0f64;
    let mut worst_drift = 0.0f64;
    for b in [0.0, 0.5] {
        for cc in [0.05, 0.2] {
            let p = RotorParams::new(1.0, 1.0, b, cc).unwrap();
            let modes = rotor::normal_mode_frequencies(&p).unwrap();
            let t_end = 10.0 * 2.0 * std::f64::consts::PI / modes.delta;
            let opts = IntegratorOptions { stride: 2, ..IntegratorOptions::default() };
            let traj = rotor::integrate_with(&p, RotorState::new(0.0, 0.0, 0.01, 0.0), t_end, &opts).unwrap();
            let beat = rotor::beat_frequency(&p, &traj).unwrap();
            worst_beat = worst_beat.max(rel(beat, modes.delta));
            worst_drift = worst_drift.max(traj.max_drift);
        }
    }
    c.check("beat vs normal-mode splitting, rel", worst_beat < 0.05, format!("{worst_beat:.1e}"));

    let p = RotorParams::new(1.0, 1.0, 0.5, 0.2).unwrap();
    let s0 = RotorState::new(0.0, 0.0, 0.5, 0.0);
    let opts = IntegratorOptions { stride: 100, ..IntegratorOptions::default() };
    let long = rotor::integrate_with(&p, s0, 1e4, &opts).unwrap();
    worst_drift = worst_drift.max(long.max_drift);
    c.check("energy drift", worst_drift < 1e-8, format!("{worst_drift:.1e}"));

    let fwd = *rotor::integrate(&p, s0, 200.0, 0.05).unwrap().last().unwrap();
    let back = *rotor::integrate(&p, fwd, -200.0, 0.05).unwrap().last().unwrap();
    let trip = back.max_abs_diff(&s0);
    c.check("time-reversal round trip", trip < 1e-6, format!("{trip:.1e}"));

    // Stated initial conditions; b and c are the CLI defaults.
    let traj = rotor::integrate(&p, s0, 200.0, 0.05).unwrap();
    let h20 = traj.h2[0];
    let cycles = exchange_cycles(&traj.h1, 0.8 * h20, 0.05 * h20);
    let modes = rotor::normal_mode_frequencies(&p).unwrap();
    let expected = (200.0 * modes.delta / (2.0 * std::f64::consts::PI)).floor() as usize;
    let beat = rotor::beat_frequency(&p, &traj).unwrap();
    c.check(
        "exchange cycles at xi2 = 0.5",
        cycles >= expected && cycles >= 1,
        format!("{cycles} (linear theory {expected}), beat {beat:.4} vs {:.4}", modes.delta),
    );
    c.finish()
}

fn early_transfer() -> Outcome {
    let mut c = Checks::default();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut si = String::new();
    for b in [0.0, 0.5] {
        for cc in [0.05, 0.2] {
            let p = RotorParams::new(1e4, 1.0, b, cc).unwrap();
            let est = rotor::energy_transfer_rate(&p, 0.5).unwrap();
            lo = lo.min(est.ratio());
            hi = hi.max(est.ratio());
            if si.is_empty() {
                let (e, f, _) = est.to_si();
                si = format!("{f:.3e} vs {e:.3e} J/s");
            }
        }
    }
    c.check("fitted slope / estimate in [1/3, 3]", lo >= 1.0 / 3.0 && hi <= 3.0, format!("{lo:.2e}..{hi:.2e} ({si})"));

    // Fixed ℧ and t; doubling N doubles c.
    let (n, uu, t) = (1e3, 5e-5, 10.0);
    let count = |n: f64| {
        let p = RotorParams::from_two_mode(n, 1.0, 0.0, uu).unwrap();
        rotor::excited_count(&p, 0.5, t).unwrap()
    };
    let ratio = count(2.0 * n) / count(n);
    c.check("n1 ratio under N-doubling vs 4", (ratio / 4.0 - 1.0).abs() < 0.1, format!("{ratio:.3}"));

    let h = rotor::bec_headcounts().unwrap();
    let (d1, d2) = h.decades();
    c.check("headcounts within 2 decades", h.within_two_decades(), format!("{d1:.2}, {d2:.2} decades"));
    c.finish()
}

fn decoherence() -> Outcome {
    let mut c = Checks::default();
    let setup = ComparatorSetup::default();
    let rate = aqt::dp_rate(setup.mass, setup.radius).unwrap();
    c.check("DP rate in [1e-3, 2e-3] /s", (1e-3..=2e-3).contains(&rate), format!("{rate:.3e}"));

    let model = QubitPairModel::new(setup.omega_over_uu, 1.0).unwrap();
    let dp = aqt::rabi_comparison(&model, Dephasing { basis: DephasingBasis::Position, rate: 100.0 }, 2, 200).unwrap();
    c.check("DP contrast at rate/uu = 100", dp.contrast < 0.02, format!("{:.1e}", dp.contrast));

    let uu_si =
        params::rabi_frequency(params::gravitational_coupling(setup.mass).unwrap().si, setup.d, setup.l).unwrap();
    let abh_ratio = aqt::abh_rate(setup.theta, setup.delta_e).unwrap() / uu_si;
    let abh =
        aqt::rabi_comparison(&model, Dephasing { basis: DephasingBasis::Energy, rate: abh_ratio }, 2, 200).unwrap();
    let dev = abh.max_relative_deviation();
    c.check(&format!("ABH deviation at rate/uu = {abh_ratio:.1e}"), dev < 0.05, format!("{dev:.1e}"));

    let trace = dp.max_trace_error.max(abh.max_trace_error);
    let min_ev = dp.min_eigenvalue.min(abh.min_eigenvalue);
    c.check("trace error", trace < 1e-10, format!("{trace:.1e}"));
    c.check("min eigenvalue", min_ev > -1e-10, format!("{min_ev:.1e}"));
    c.finish()
}

fn read_dir(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    let mut files = 0;
    for scenario in Scenario::ALL {
        let defaults = Args {
            config: None,
            out: None,
            format: None,
            threads: None,
            seed: None,
            validate: false,
            defaults: Some(scenario.name().into()),
        };
        let CliOutcome::Defaults(text) = cli::run(&defaults).unwrap() else { unreachable!() };
        let cfg = tmp.path().join(format!("{scenario}.toml"));
        fs::write(&cfg, text).unwrap();
        let mut outputs = Vec::new();
        for (k, threads) in [1, 4].into_iter().enumerate() {
            let dir = tmp.path().join(format!("{scenario}-{k}"));
            let args = Args {
                config: Some(cfg.clone()),
                out: Some(dir.clone()),
                threads: Some(threads),
                defaults: None,
                ..defaults.clone()
            };
            cli::run(&args).unwrap();
            outputs.push(read_dir(&dir));
        }
        files += outputs[0].len();
        if outputs[0] != outputs[1] {
            differing.push(scenario.name());
        }
    }
    let mut c = Checks::default();
    c.check(
        "scenarios with differing bytes",
        differing.is_empty() && files > 0,
        format!("{} of {} ({files} files)", differing.len(), Scenario::ALL.len()),
    );
    c.finish()
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "spectrum identity", budget: secs(1), run: spectrum_identity, known_failure: None },
        Criterion {
            id: 2,
            name: "closed-form evolution vs matrix exponential",
            budget: secs(5),
            run: evolution_vs_expm,
            known_failure: None,
        },
        Criterion { id: 3, name: "purity closed form", budget: secs(5), run: purity, known_failure: None },
        Criterion { id: 4, name: "mass scale", budget: secs(1), run: mass_scale, known_failure: None },
        Criterion {
            id: 5,
            name: "overlap asymptotics",
            budget: secs(30),
            run: overlap_asymptotics,
            known_failure: Some(
                "both closed forms are about twice the overlap integrals; the quadrature matches \
                 sqrt(m Omega/2 pi) e^(z/4) K0(z/4) and 1/sqrt(d^2 + L^2) instead",
            ),
        },
        Criterion { id: 6, name: "WKB vs diagonalisation", budget: secs(60), run: wkb_vs_oracle, known_failure: None },
        Criterion { id: 7, name: "GGP limits", budget: secs(60), run: ggp_limits, known_failure: None },
        Criterion { id: 8, name: "N = 1 reduction", budget: secs(5), run: n1_reduction, known_failure: None },
        Criterion { id: 9, name: "rotor normal modes", budget: secs(60), run: rotor_modes, known_failure: None },
        Criterion {
            id: 10,
            name: "early-time transfer",
            budget: secs(30),
            run: early_transfer,
            known_failure: Some(
                "h1 starts quadratically in t, so its early slope is far below the linear-rate estimate, \
                 and n1 ~ c^2 t^2 N grows as N^3 at fixed coupling per pair",
            ),
        },
        Criterion { id: 11, name: "decoherence comparators", budget: secs(10), run: decoherence, known_failure: None },
        Criterion { id: 12, name: "CLI determinism", budget: secs(120), run: determinism, known_failure: None },
    ];
    println!("acceptance: {} criteria", criteria.len());
    let reports: Vec<_> = criteria.iter().map(run_criterion).collect();
    let passed = reports.iter().filter(|r| r.pass).count();
    let known = reports.iter().filter(|r| !r.pass && r.expected_failure).count();
    let unexpected: Vec<u32> = reports.iter().filter(|r| r.pass == r.expected_failure).map(|r| r.id).collect();
    let total: f64 = reports.iter().map(|r| r.elapsed.as_secs_f64()).sum();
    println!("acceptance: {passed} passed, {} failed ({known} known), {:.1} s", reports.len() - passed, total);
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected results for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
