//! One runner per scenario. Natural-unit quantities carry the unit `nat`
//! (`ħ = 1`, lengths and times in whatever units `m` and `Ω` are given in).

use rayon::prelude::*;
use serde_json::json;

use super::config::*;
use super::output::{Artifact, Cell, Table};
use crate::aqt::{self, ComparatorSetup, DecoherenceModel};
use crate::error::Result;
use crate::ggp::{self, GgpProblem};
use crate::overlap::overlap_coefficients;
use crate::params::{self, CODATA};
use crate::qubitpair::{QubitPairModel, TwoQubitState, EE, EG, GE, GG};
use crate::rotor::{self, IntegratorOptions, LyapunovOptions, RotorParams, RotorState};
use crate::semiclassical::{self, DoubleWell, FdGrid, ModeOptions};
use crate::twomode::{self, BipartiteEvolver, BipartiteSpinState, TwoModeParams};

fn linspace(end: f64, samples: usize) -> impl Iterator<Item = f64> {
    let n = samples.max(1);
    (0..=n).map(move |k| end * k as f64 / n as f64)
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<Artifact> {
    match &config.parameters {
        Parameters::QubitEvolve(p) => qubit_evolve(p),
        Parameters::QubitGround(p) => qubit_ground(p),
        Parameters::SemiclassicalOverlaps(p) => semiclassical_overlaps(p),
        Parameters::WkbVsOracle(p) => wkb_vs_oracle(p),
        Parameters::GgpSolve(p) => ggp_solve(p),
        Parameters::TwomodeEvolve(p) => twomode_evolve(p),
        Parameters::RotorSimulate(p) => rotor_simulate(p),
        Parameters::RotorSpectrum(p) => rotor_spectrum(p),
        Parameters::RotorLyapunov(p) => rotor_lyapunov(p),
        Parameters::AqtCompare(p) => aqt_compare(p),
        Parameters::Sweep(p) => sweep(p),
    }
}

fn qubit_evolve(p: &QubitEvolveParams) -> Result<Artifact> {
    let model = QubitPairModel::new(p.omega, p.uu)?;
    let index = match p.initial {
        QubitLabel::Ee => EE,
        QubitLabel::Gg => GG,
        QubitLabel::Eg => EG,
        QubitLabel::Ge => GE,
    };
    let psi0 = TwoQubitState::basis(index);
    let mut table = Table::new(
        "",
        &[("t", "s"), ("p_ee", "1"), ("p_gg", "1"), ("p_eg", "1"), ("p_ge", "1"), ("purity_deficit", "1")],
    );
    for t in linspace(p.t_end, p.samples) {
        let psi = model.evolve(&psi0, t)?;
        table.push(vec![
            t.into(),
            psi.probability(EE).into(),
            psi.probability(GG).into(),
            psi.probability(EG).into(),
            psi.probability(GE).into(),
            psi.purity_deficit().into(),
        ]);
    }
    let mut art = Artifact { tables: vec![table], ..Default::default() };
    art.note("omega_prime_rad_per_s", model.omega_prime());
    art.note("eigenvalues_rad_per_s", model.eigenvalues());
    Ok(art)
}

fn qubit_ground(p: &QubitGroundParams) -> Result<Artifact> {
    let mut table = Table::new(
        "",
        &[
            ("uu", "rad/s"),
            ("omega_prime", "rad/s"),
            ("ground_energy", "rad/s"),
            ("purity_deficit", "1"),
            ("weak_coupling_limit", "1"),
        ],
    );
    for &uu in &p.uu_values {
        let model = QubitPairModel::new(p.omega, uu)?;
        let g = model.ground_state();
        let limit = if p.omega > 0.0 { uu * uu / (2.0 * p.omega * p.omega) } else { f64::NAN };
        table.push(vec![
            uu.into(),
            model.omega_prime().into(),
            model.energy(&g).into(),
            g.purity_deficit().into(),
            limit.into(),
        ]);
    }
    Ok(Artifact { tables: vec![table], ..Default::default() })
}

fn semiclassical_overlaps(p: &OverlapParams) -> Result<Artifact> {
    let well = DoubleWell::quartic(p.m, p.big_omega, p.l)?;
    let split = semiclassical::wkb_energy_split(&well)?;
    let (mode, diag) = semiclassical::semiclassical_mode(&well, ModeOptions::default())?;
    let mut table = Table::new(
        "",
        &[
            ("d", "nat"),
            ("gamma_plus", "nat"),
            ("gamma_minus", "nat"),
            ("gamma_0", "nat"),
            ("gamma_1", "nat"),
            ("asymptotic_sum", "nat"),
            ("asymptotic_difference", "nat"),
            ("asymptotic_gamma_0", "nat"),
            ("asymptotic_gamma_1", "nat"),
            ("quoted_sum", "nat"),
            ("quoted_difference", "nat"),
            ("quoted_rabi_per_alpha", "nat"),
        ],
    );
    let rows: Vec<Result<Vec<Cell>>> = p
        .d_values
        .par_iter()
        .map(|&d| {
            let q = overlap_coefficients(&mode, d)?;
            let a = semiclassical::overlap_asymptotics(&well, d, split)?;
            let o = a.overlaps;
            Ok(vec![
                d.into(),
                q.gamma_plus.into(),
                q.gamma_minus.into(),
                q.gamma_0.into(),
                q.gamma_1.into(),
                (o.gamma_plus + o.gamma_minus).into(),
                (o.gamma_plus - o.gamma_minus).into(),
                o.gamma_0.into(),
                o.gamma_1.into(),
                a.quoted_sum.into(),
                a.quoted_difference.into(),
                a.quoted_rabi_per_alpha.into(),
            ])
        })
        .collect();
    for r in rows {
        table.push(r?);
    }
    let mut art = Artifact { tables: vec![table], ..Default::default() };
    art.note("semiclassical_parameter", well.semiclassical_parameter());
    art.note("wkb_splitting", split);
    art.note("match_point", diag.x_match);
    art.note("turning_point", diag.turning_point);
    art.note("match_value_jump", diag.value_jump);
    Ok(art)
}

fn wkb_vs_oracle(p: &WkbParams) -> Result<Artifact> {
    let mut table = Table::new(
        "",
        &[
            ("l", "nat"),
            ("barrier_height", "nat"),
            ("omega_wkb", "nat"),
            ("omega_oracle", "nat"),
            ("log_ratio", "1"),
            ("e_g", "nat"),
            ("e_e", "nat"),
            ("e_2", "nat"),
            ("validity_ratio", "1"),
        ],
    );
    let rows: Vec<Result<Vec<Cell>>> = p
        .l_values
        .par_iter()
        .map(|&l| {
            let well = DoubleWell::quartic(p.m, p.big_omega, l)?;
            let w = semiclassical::wkb_energy_split(&well)?;
            let o = semiclassical::schrodinger_splitting_oracle(&well, FdGrid::default())?;
            Ok(vec![
                l.into(),
                well.barrier_height().into(),
                w.into(),
                o.splitting.into(),
                (w / o.splitting).ln().into(),
                o.e_g.into(),
                o.e_e.into(),
                o.e_2.into(),
                o.validity_ratio.into(),
            ])
        })
        .collect();
    for r in rows {
        table.push(r?);
    }
    Ok(Artifact { tables: vec![table], ..Default::default() })
}

fn ggp_solve(p: &GgpParams) -> Result<Artifact> {
    let well = DoubleWell::quartic(p.m, p.big_omega, p.l)?;
    let problem = GgpProblem::from_well(&well, p.g, p.alpha, p.n_particles, p.eps)?;
    let grid = problem.grid(p.grid_points, p.margin)?;
    problem.check_grid(&grid)?;
    let (g0, g1) =
        rayon::join(|| ggp::solve_ground_state(&problem, &grid), || ggp::solve_first_excited(&problem, &grid));
    let (g0, g1) = (g0?, g1?);
    let c = ggp::two_mode_coefficients(&g0, &g1, p.d, p.eps)?;

    let mut profile = Table::new("", &[("x", "nat"), ("potential", "nat"), ("phi_0", "nat"), ("phi_1", "nat")]);
    for (i, &x) in g0.x.iter().enumerate() {
        profile.push(vec![x.into(), problem.potential(x).into(), g0.phi[i].into(), g1.phi[i].into()]);
    }
    let mut trace = Table::new("trace", &[("step", "1"), ("energy_0", "nat"), ("energy_1", "nat")]);
    let len = g0.energy_trace.len().max(g1.energy_trace.len());
    for k in 0..len {
        let e0 = g0.energy_trace.get(k).copied().unwrap_or(f64::NAN);
        let e1 = g1.energy_trace.get(k).copied().unwrap_or(f64::NAN);
        trace.push(vec![k.into(), e0.into(), e1.into()]);
    }

    let mut art = Artifact { tables: vec![profile, trace], ..Default::default() };
    art.note("mu_0", g0.mu);
    art.note("mu_1", g1.mu);
    art.note("energy_0", g0.energy);
    art.note("energy_1", g1.energy);
    art.note("residual_0", g0.residual);
    art.note("residual_1", g1.residual);
    art.note("omega", c.omega);
    art.note("delta_0", c.delta_0);
    art.note("delta_1", c.delta_1);
    art.note("localization", c.localization);
    art.note("localized", c.localized());
    let set = |o: &crate::overlap::OverlapSet<f64>| json!({"gamma_plus": o.gamma_plus, "gamma_minus": o.gamma_minus, "gamma_0": o.gamma_0, "gamma_1": o.gamma_1});
    art.note("beta", set(&c.beta));
    art.note("gamma", set(&c.gamma));
    Ok(art)
}

fn twomode_evolve(p: &TwomodeParams) -> Result<Artifact> {
    let params = TwoModeParams::simple(p.n, p.omega_bar, p.kappa, p.uu)?;
    let a = twomode::coherent_state(p.n, p.xi1, p.phi1)?;
    let b = twomode::coherent_state(p.n, p.xi2, p.phi2)?;
    let psi0 = BipartiteSpinState::product(&a, &b)?;
    let ev = BipartiteEvolver::new(&params)?;
    let ops = twomode::spin_operators::<f64>(p.n)?;
    let mut table = Table::new(
        "",
        &[
            ("t", "nat"),
            ("energy", "nat"),
            ("sx_1", "1"),
            ("sz_1", "1"),
            ("sx_2", "1"),
            ("sz_2", "1"),
            ("entropy", "nat"),
        ],
    );
    let n = p.n as f64;
    let times: Vec<f64> = linspace(p.t_end, p.samples).collect();
    let rows: Vec<Result<Vec<Cell>>> = times
        .par_iter()
        .map(|&t| {
            let s = ev.evolve(&psi0, t)?;
            Ok(vec![
                t.into(),
                ev.energy(&s).into(),
                (s.local_expectation(&ops.sx, 0) / n).into(),
                (s.local_expectation(&ops.sz, 0) / n).into(),
                (s.local_expectation(&ops.sx, 1) / n).into(),
                (s.local_expectation(&ops.sz, 1) / n).into(),
                twomode::entanglement_entropy(&s)?.into(),
            ])
        })
        .collect();
    for r in rows {
        table.push(r?);
    }
    Ok(Artifact { tables: vec![table], ..Default::default() })
}

fn rotor_simulate(p: &RotorSimParams) -> Result<Artifact> {
    let rp = RotorParams::new(p.n, p.omega_bar, p.b, p.c)?;
    let s0 = RotorState::new(p.xi1, p.phi1, p.xi2, p.phi2);
    let opts = IntegratorOptions { step: p.step, stride: p.stride, ..IntegratorOptions::default() };
    let traj = rotor::integrate_with(&rp, s0, p.t_end / p.omega_bar, &opts)?;
    let mut table = Table::new(
        "",
        &[
            ("omega_bar_t", "1"),
            ("h1", "N omega_bar"),
            ("h2", "N omega_bar"),
            ("energy", "N omega_bar"),
            ("xi_1", "1"),
            ("phi_1", "rad"),
            ("xi_2", "1"),
            ("phi_2", "rad"),
        ],
    );
    for (i, s) in traj.states.iter().enumerate() {
        table.push(vec![
            (traj.times[i] * p.omega_bar).into(),
            traj.h1[i].into(),
            traj.h2[i].into(),
            traj.energies[i].into(),
            s.xi1.into(),
            s.phi1.into(),
            s.xi2.into(),
            s.phi2.into(),
        ]);
    }
    let modes = rotor::normal_mode_frequencies(&rp)?;
    let mut art = Artifact { tables: vec![table], ..Default::default() };
    art.note("max_energy_drift", traj.max_drift);
    art.note("omega_plus", modes.plus);
    art.note("omega_minus", modes.minus);
    art.note("delta", modes.delta);
    Ok(art)
}

fn rotor_spectrum(p: &RotorSpectrumParams) -> Result<Artifact> {
    let points: Vec<(f64, f64)> = p.b_values.iter().flat_map(|&b| p.c_values.iter().map(move |&c| (b, c))).collect();
    let rows: Vec<Result<Vec<Cell>>> = points
        .par_iter()
        .map(|&(b, c)| {
            let rp = RotorParams::new(p.n, p.omega_bar, b, c)?;
            let modes = rotor::normal_mode_frequencies(&rp)?;
            let t_end = p.beats * 2.0 * std::f64::consts::PI / modes.delta;
            let opts = IntegratorOptions { step: p.step, ..IntegratorOptions::default() };
            let traj = rotor::integrate_with(&rp, RotorState::new(0.0, 0.0, p.amplitude, 0.0), t_end, &opts)?;
            let beat = rotor::beat_frequency(&rp, &traj)?;
            Ok(vec![
                b.into(),
                c.into(),
                beat.into(),
                modes.delta.into(),
                ((beat - modes.delta) / modes.delta).into(),
                modes.plus.into(),
                modes.minus.into(),
                traj.max_drift.into(),
            ])
        })
        .collect();
    let mut table = Table::new(
        "",
        &[
            ("b", "1"),
            ("c", "1"),
            ("beat_fft", "rad/s"),
            ("delta", "rad/s"),
            ("relative_error", "1"),
            ("omega_plus", "rad/s"),
            ("omega_minus", "rad/s"),
            ("max_energy_drift", "1"),
        ],
    );
    for r in rows {
        table.push(r?);
    }
    Ok(Artifact { tables: vec![table], ..Default::default() })
}

fn rotor_lyapunov(p: &RotorLyapunovParams) -> Result<Artifact> {
    let points: Vec<(f64, f64)> = p.b_values.iter().flat_map(|&b| p.c_values.iter().map(move |&c| (b, c))).collect();
    let s0 = RotorState::new(p.xi1, p.phi1, p.xi2, p.phi2);
    let opts = LyapunovOptions { interval: p.interval, step: p.step, seed: p.seed, ..LyapunovOptions::default() };
    let results = rotor::lyapunov_map(p.n, p.omega_bar, &points, s0, p.t_end / p.omega_bar, &opts);
    let mut table =
        Table::new("", &[("b", "1"), ("c", "1"), ("stability_margin", "1"), ("exponent", "rad/s"), ("status", "-")]);
    for (&(b, c), r) in points.iter().zip(results) {
        let margin = 1.0 + b - c.abs();
        let (exp, status) = match r {
            Ok(e) => (e, "ok".to_string()),
            Err(e) => (f64::NAN, e.to_string()),
        };
        table.push(vec![b.into(), c.into(), margin.into(), exp.into(), status.into()]);
    }
    Ok(Artifact { tables: vec![table], ..Default::default() })
}

fn aqt_compare(p: &AqtParams) -> Result<Artifact> {
    let setup = ComparatorSetup {
        mass: p.mass_amu * CODATA.amu,
        radius: p.radius,
        d: p.d,
        l: p.l,
        theta: p.theta,
        delta_e: p.delta_e_ev * CODATA.e,
        omega_over_uu: p.omega_over_uu,
        periods: p.periods,
    };
    let mut art = Artifact::default();
    let nse = if p.nse {
        let well = DoubleWell::quartic(p.well.m, p.well.big_omega, p.well.l)?;
        let problem = GgpProblem::from_well(&well, 0.0, p.nse_alpha, 2.0, p.nse_eps)?;
        let grid = problem.grid(p.nse_grid_points, 6.0)?;
        let q = aqt::nse_qubit_parameters(&well, p.nse_alpha, p.nse_d, p.nse_eps, &grid)?;
        art.note(
            "nse",
            json!({
                "omega_nse": q.omega_nse,
                "omega_linear": q.omega_linear,
                "uu_nse": q.uu_nse,
                "uu_linear": q.uu_linear,
                "mu_0": q.mu0,
                "mu_1": q.mu1,
                "localization": q.localization,
            }),
        );
        Some(q.model)
    } else {
        None
    };
    let verdicts = aqt::comparator_table(&setup, nse.as_ref())?;
    let mut table = Table::new(
        "",
        &[("model", "-"), ("rate_over_uu", "1"), ("contrast", "1"), ("survives", "bool"), ("note", "-")],
    );
    for v in verdicts {
        table.push(vec![
            v.model.into(),
            v.rate_over_uu.unwrap_or(f64::NAN).into(),
            v.contrast.unwrap_or(f64::NAN).into(),
            v.gravcats_survive.into(),
            v.note.into(),
        ]);
    }
    art.tables.push(table);
    let uu = params::rabi_frequency(params::gravitational_coupling(setup.mass)?.si, setup.d, setup.l)?;
    art.note("uu_rad_per_s", uu);
    art.note("dp_rate_per_s", DecoherenceModel::Dp { mass: setup.mass, radius: setup.radius }.rate()?);
    art.note("abh_rate_per_s", DecoherenceModel::Abh { theta: setup.theta, delta_e: setup.delta_e }.rate()?);
    Ok(art)
}

fn sweep(p: &SweepParams) -> Result<Artifact> {
    let rows: Vec<Result<Vec<Cell>>> = p
        .masses_amu
        .par_iter()
        .map(|&m_amu| {
            let m = m_amu * CODATA.amu;
            let uu = params::rabi_frequency(params::gravitational_coupling(m)?.si, p.d, p.l)?;
            let period = params::rabi_period(m, p.d, p.l)?;
            Ok(vec![m_amu.into(), m.into(), uu.into(), period.into()])
        })
        .collect();
    let mut table = Table::new("", &[("mass", "amu"), ("mass", "kg"), ("uu", "rad/s"), ("period", "s")]);
    for r in rows {
        table.push(r?);
    }
    Ok(Artifact { tables: vec![table], ..Default::default() })
}

/// Dry-run physics checks. An empty list means nothing looks off.
pub fn validate(config: &ScenarioConfig) -> Vec<String> {
    let mut w = Vec::new();
    let semiclassical = |w: &mut Vec<String>, m: f64, big_omega: f64, l: f64| {
        let s = (m * big_omega).sqrt() * l;
        if !(s >= 5.0) {
            w.push(format!(
                "semiclassical validity: sqrt(m Omega) L = {s} is below 5; tunnelling splittings and overlaps are unreliable"
            ));
        }
    };
    let rotor = |w: &mut Vec<String>, b: f64, c: f64| {
        let margin = 1.0 + b - c.abs();
        if !(margin > 0.0) {
            w.push(format!(
                "rotor stability criterion 1 + b - |c| > 0 violated at (b, c) = ({b}, {c}): margin {margin}"
            ));
        }
    };
    match &config.parameters {
        Parameters::QubitEvolve(p) => {
            if p.uu == 0.0 {
                w.push("uu = 0: populations stay constant".into());
            }
        }
        Parameters::QubitGround(_) | Parameters::Sweep(_) => {}
        Parameters::SemiclassicalOverlaps(p) => semiclassical(&mut w, p.m, p.big_omega, p.l),
        Parameters::WkbVsOracle(p) => {
            for &l in &p.l_values {
                semiclassical(&mut w, p.m, p.big_omega, l);
            }
        }
        Parameters::GgpSolve(p) => semiclassical(&mut w, p.m, p.big_omega, p.l),
        Parameters::TwomodeEvolve(p) => {
            let n = p.n as f64;
            rotor(&mut w, n * p.kappa / p.omega_bar, n * p.uu / p.omega_bar);
        }
        Parameters::RotorSimulate(p) => rotor(&mut w, p.b, p.c),
        Parameters::RotorSpectrum(p) => {
            for &b in &p.b_values {
                for &c in &p.c_values {
                    rotor(&mut w, b, c);
                }
            }
        }
        Parameters::RotorLyapunov(p) => {
            for &b in &p.b_values {
                for &c in &p.c_values {
                    rotor(&mut w, b, c);
                }
            }
        }
        Parameters::AqtCompare(p) => {
            if p.nse {
                semiclassical(&mut w, p.well.m, p.well.big_omega, p.well.l);
            }
        }
    }
    w
}
