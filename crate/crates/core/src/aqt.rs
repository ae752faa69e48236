//! Comparators from alternative quantum theories: gravitational decoherence
//! rates, open-system evolution of the qubit pair under local dephasing, and
//! the qubit parameters implied by the Newton–Schrödinger equation.
//!
//! | model | mechanism | gravcats |
//! |---|---|---|
//! | Diósi–Penrose | position-basis decoherence, `Γ = GM²/(ħR)` | no |
//! | Newton–Schrödinger | nonlinear unitary, no decoherence | yes |
//! | Anastopoulos–Hu / Blencowe | energy-basis decoherence, `Γ ~ 10Θ(ΔE)²` | yes |
//! | GRW / CSL, Power–Percival, Asprea–Gasbarri–Bassi | position-basis collapse or noise | no, or tightly bounded (not simulated) |

use ndarray::Array2;

use crate::error::{domain, Error, Result};
use crate::ggp::{self, GgpProblem, GgpReal, Grid1D};
use crate::linalg;
use crate::params::{self, CODATA};
use crate::qubitpair::{basis_index, QubitPairModel, TwoQubitDensity, TwoQubitState, EG, GE};
use crate::scalar::{Complex, Real};
use crate::semiclassical::DoubleWell;

/// Diósi–Penrose rate `GM²/(ħR)` in 1/s for mass `m` (kg) and radius `r` (m).
pub fn dp_rate(m: f64, r: f64) -> Result<f64> {
    if !(m > 0.0) || !(r > 0.0) {
        return Err(domain(format!("need M > 0 and R > 0, got ({m}, {r})")));
    }
    Ok(CODATA.g * m * m / (CODATA.hbar * r))
}

/// Energy-basis rate `Γ = 10 Θ (ΔE)²` evaluated in Planck units and returned
/// in 1/s. `theta` is the noise temperature in units of the Planck
/// temperature; `delta_e` is in joules.
pub fn abh_rate(theta: f64, delta_e: f64) -> Result<f64> {
    if !(theta >= 0.0) || !(delta_e >= 0.0) {
        return Err(domain(format!("need theta >= 0 and dE >= 0, got ({theta}, {delta_e})")));
    }
    if theta > 1.0 {
        log::warn!("noise temperature {theta} T_P exceeds the Planck temperature");
    }
    let e = delta_e / CODATA.planck_energy();
    Ok(10.0 * theta * e * e / CODATA.planck_time())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoherenceModel {
    /// Mass (kg) and radius (m).
    Dp { mass: f64, radius: f64 },
    /// Noise temperature (Planck units) and energy difference (J).
    Abh { theta: f64, delta_e: f64 },
    /// Dimensionless coupling, splitting (rad/s), temperature (K).
    Ohmic { eta: f64, omega: f64, temperature: f64 },
}

impl DecoherenceModel {
    /// Rate in 1/s.
    pub fn rate(&self) -> Result<f64> {
        match *self {
            Self::Dp { mass, radius } => dp_rate(mass, radius),
            Self::Abh { theta, delta_e } => abh_rate(theta, delta_e),
            Self::Ohmic { eta, omega, temperature } => params::ohmic_rate(eta, omega, temperature),
        }
    }

    /// Basis in which the model dephases each qubit.
    pub fn basis(&self) -> DephasingBasis {
        match self {
            Self::Dp { .. } | Self::Ohmic { .. } => DephasingBasis::Position,
            Self::Abh { .. } => DephasingBasis::Energy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DephasingBasis {
    /// `σx` per qubit: the localised states `|±⟩ = (|g⟩ ± |e⟩)/√2`.
    Position,
    /// `σz` per qubit.
    Energy,
}

/// Local dephasing `Σ_k Γ(σ_k ρ σ_k − ρ)`; single-qubit coherences in the
/// chosen basis decay as `exp(−2Γt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dephasing<T> {
    pub basis: DephasingBasis,
    pub rate: T,
}

type M4<T> = [[Complex<T>; 4]; 4];

fn zero4<T: Real>() -> M4<T> {
    [[Complex::new(T::zero(), T::zero()); 4]; 4]
}

/// Single-qubit Pauli on qubit `which` in the ordered two-qubit basis,
/// with `e ↔ +1`.
fn local_pauli<T: Real>(basis: DephasingBasis, which: usize) -> M4<T> {
    let mut m = zero4();
    for q1 in 0..2 {
        for q2 in 0..2 {
            let from = basis_index(q1, q2);
            let own = if which == 0 { q1 } else { q2 };
            match basis {
                DephasingBasis::Energy => {
                    let s = if own == 0 { T::one() } else { -T::one() };
                    m[from][from] = Complex::new(s, T::zero());
                }
                DephasingBasis::Position => {
                    let to = if which == 0 { basis_index(1 - q1, q2) } else { basis_index(q1, 1 - q2) };
                    m[to][from] = Complex::new(T::one(), T::zero());
                }
            }
        }
    }
    m
}

fn mul<T: Real>(a: &M4<T>, b: &M4<T>) -> M4<T> {
    let mut c = zero4();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            for j in 0..4 {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

struct Generator<T> {
    h: M4<T>,
    ops: Vec<M4<T>>,
    rate: T,
}

impl<T: Real> Generator<T> {
    fn apply(&self, rho: &M4<T>) -> M4<T> {
        let hr = mul(&self.h, rho);
        let rh = mul(rho, &self.h);
        let mut out = zero4();
        let mi = Complex::new(T::zero(), -T::one());
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = mi * (hr[i][j] - rh[i][j]);
            }
        }
        for l in &self.ops {
            let lrl = mul(&mul(l, rho), l);
            for i in 0..4 {
                for j in 0..4 {
                    out[i][j] += (lrl[i][j] - rho[i][j]) * self.rate;
                }
            }
        }
        out
    }

    fn rk4(&self, rho: &M4<T>, dt: T) -> M4<T> {
        let add = |a: &M4<T>, b: &M4<T>, s: T| {
            let mut c = *a;
            for i in 0..4 {
                for j in 0..4 {
                    c[i][j] += b[i][j] * s;
                }
            }
            c
        };
        let half = dt / T::lit(2.0);
        let k1 = self.apply(rho);
        let k2 = self.apply(&add(rho, &k1, half));
        let k3 = self.apply(&add(rho, &k2, half));
        let k4 = self.apply(&add(rho, &k3, dt));
        let mut out = *rho;
        let sixth = dt / T::lit(6.0);
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] += (k1[i][j] + (k2[i][j] + k3[i][j]) * T::lit(2.0) + k4[i][j]) * sixth;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladTrajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<TwoQubitDensity<T>>,
    pub max_trace_error: T,
    /// Smallest density-matrix eigenvalue seen at any recorded time.
    pub min_eigenvalue: T,
}

impl<T: Real> LindbladTrajectory<T> {
    pub fn populations(&self, index: usize) -> Vec<T> {
        self.states.iter().map(|r| r.population(index)).collect()
    }

    pub fn purity_deficits(&self) -> Vec<T> {
        self.states.iter().map(|r| r.purity_deficit()).collect()
    }
}

/// Integrates the master equation with the qubit-pair Hamiltonian and local
/// dephasing on both qubits by fixed-step RK4, recording `samples + 1`
/// evenly spaced states on `[0, t]`.
pub fn lindblad_evolve<T: Real>(
    model: &QubitPairModel<T>,
    dephasing: Dephasing<T>,
    rho0: &TwoQubitDensity<T>,
    t: T,
    samples: usize,
) -> Result<LindbladTrajectory<T>> {
    if !(dephasing.rate >= T::zero()) {
        return Err(domain(format!("dephasing rate must be non-negative, got {}", dephasing.rate)));
    }
    if !(t >= T::zero()) || samples == 0 {
        return Err(domain("need t >= 0 and at least one sample"));
    }
    let hm = model.hamiltonian_matrix();
    let mut h = zero4();
    for i in 0..4 {
        for j in 0..4 {
            h[i][j] = Complex::new(hm[[i, j]], T::zero());
        }
    }
    let gen = Generator {
        h,
        ops: vec![local_pauli(dephasing.basis, 0), local_pauli(dephasing.basis, 1)],
        rate: dephasing.rate,
    };
    // Step bounded by the fastest scale of the generator.
    let scale = T::lit(2.0) * (model.omega_prime() + model.shift_abs()) + T::lit(4.0) * dephasing.rate;
    let per_sample = t / T::from_usize_(samples);
    let sub =
        if scale > T::zero() { (per_sample * scale / T::lit(0.02)).ceil().to_usize().unwrap_or(1).max(1) } else { 1 };
    let dt = per_sample / T::from_usize_(sub);

    let mut rho = zero4();
    for i in 0..4 {
        for j in 0..4 {
            rho[i][j] = rho0.matrix[[i, j]];
        }
    }
    let mut traj = LindbladTrajectory {
        times: Vec::with_capacity(samples + 1),
        states: Vec::with_capacity(samples + 1),
        max_trace_error: T::zero(),
        min_eigenvalue: T::infinity(),
    };
    let tol = T::tol(1e-8);
    for k in 0..=samples {
        if k > 0 {
            for _ in 0..sub {
                rho = gen.rk4(&rho, dt);
            }
        }
        let m = Array2::from_shape_fn((4, 4), |(i, j)| rho[i][j]);
        let state = TwoQubitDensity { matrix: m };
        let tr_err = (state.trace() - T::one()).abs();
        let min_ev = linalg::hermitian_eigenvalues(&state.matrix)?.into_iter().fold(T::infinity(), T::min);
        traj.max_trace_error = traj.max_trace_error.max(tr_err);
        traj.min_eigenvalue = traj.min_eigenvalue.min(min_ev);
        if min_ev < -tol {
            return Err(Error::NoConvergence {
                iterations: k,
                detail: format!("density matrix lost positivity (eigenvalue {min_ev})"),
            });
        }
        traj.times.push(per_sample * T::from_usize_(k));
        traj.states.push(state);
    }
    Ok(traj)
}

trait ShiftAbs<T> {
    fn shift_abs(&self) -> T;
}

impl<T: Real> ShiftAbs<T> for QubitPairModel<T> {
    fn shift_abs(&self) -> T {
        self.offset.map(|c| c.abs()).unwrap_or_else(T::zero)
    }
}

/// Visibility of the Rabi oscillation at `2℧` in a population record:
/// twice the magnitude of its Fourier coefficient at `2℧` over the whole
/// number of periods `π/℧` that fit in the record (trapezoid rule). An
/// undamped `sin²(℧t)` gives 1.
pub fn rabi_contrast<T: Real>(times: &[T], population: &[T], uu: T) -> Result<T> {
    if times.len() != population.len() || times.len() < 3 || !(uu > T::zero()) {
        return Err(domain("need matching records of length >= 3 and uu > 0"));
    }
    let period = T::PI() / uu;
    let span = times[times.len() - 1] - times[0];
    let periods = (span / period * (T::one() + T::lit(1e-9))).floor();
    if periods < T::one() {
        return Err(domain("record shorter than one Rabi period"));
    }
    let end = times[0] + periods * period;
    let w = T::lit(2.0) * uu;
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut total = T::zero();
    for k in 1..times.len() {
        let (t0, t1) = (times[k - 1], times[k]);
        if t0 >= end * (T::one() + T::lit(1e-12)) {
            break;
        }
        let h = t1 - t0;
        let f = |t: T, p: T| Complex::from_polar(p, -w * t);
        acc += (f(t0, population[k - 1]) + f(t1, population[k])) * (h / T::lit(2.0));
        total += h;
    }
    Ok(T::lit(4.0) * acc.norm() / total)
}

/// Rabi record of the pair started in `|e,g⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct RabiComparison<T> {
    pub times: Vec<T>,
    /// `|g,e⟩` population with and without dephasing.
    pub population: Vec<T>,
    pub unitary_population: Vec<T>,
    pub purity_deficit: Vec<T>,
    pub unitary_purity_deficit: Vec<T>,
    pub contrast: T,
    pub unitary_contrast: T,
    pub max_trace_error: T,
    pub min_eigenvalue: T,
}

impl<T: Real> RabiComparison<T> {
    /// Largest deviation of either curve from its unitary counterpart,
    /// relative to the unitary curve's peak.
    pub fn max_relative_deviation(&self) -> T {
        let rel = |a: &[T], b: &[T]| {
            let peak = b.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            a.iter().zip(b).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs())) / peak
        };
        rel(&self.population, &self.unitary_population).max(rel(&self.purity_deficit, &self.unitary_purity_deficit))
    }
}

/// Evolves `|e,g⟩` for `periods` Rabi periods `π/℧` with and without
/// dephasing.
pub fn rabi_comparison<T: Real>(
    model: &QubitPairModel<T>,
    dephasing: Dephasing<T>,
    periods: usize,
    samples_per_period: usize,
) -> Result<RabiComparison<T>> {
    if !(model.uu > T::zero()) || periods == 0 || samples_per_period < 8 {
        return Err(domain("need uu > 0, at least one period and 8 samples per period"));
    }
    let t = T::PI() / model.uu * T::from_usize_(periods);
    let rho0 = TwoQubitState::basis(EG).density();
    let traj = lindblad_evolve(model, dephasing, &rho0, t, periods * samples_per_period)?;
    let mut unitary_population = Vec::with_capacity(traj.len());
    let mut unitary_purity_deficit = Vec::with_capacity(traj.len());
    let psi0 = TwoQubitState::basis(EG);
    for &ti in &traj.times {
        let psi = model.evolve(&psi0, ti)?;
        unitary_population.push(psi.probability(GE));
        unitary_purity_deficit.push(psi.purity_deficit());
    }
    let population = traj.populations(GE);
    let contrast = rabi_contrast(&traj.times, &population, model.uu)?;
    let unitary_contrast = rabi_contrast(&traj.times, &unitary_population, model.uu)?;
    Ok(RabiComparison {
        purity_deficit: traj.purity_deficits(),
        times: traj.times,
        population,
        unitary_population,
        unitary_purity_deficit,
        contrast,
        unitary_contrast,
        max_trace_error: traj.max_trace_error,
        min_eigenvalue: traj.min_eigenvalue,
    })
}

impl<T> LindbladTrajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Qubit parameters from stationary Newton–Schrödinger states.
#[derive(Debug, Clone)]
pub struct NseQubit<T> {
    pub model: QubitPairModel<T>,
    /// `μ1 − μ0` with and without self-gravity.
    pub omega_nse: T,
    pub omega_linear: T,
    /// `αγ−[ψ0]` with and without self-gravity.
    pub uu_nse: T,
    pub uu_linear: T,
    pub mu0: T,
    pub mu1: T,
    pub localization: T,
}

/// Solves the single-particle Newton–Schrödinger equation (the GGP solver
/// with `g = 0` and self-coupling `α`) for the even and odd modes and reads
/// off `ω_NSE = μ1 − μ0` and `℧_NSE = αγ−[ψ0]` for axes a distance `d` apart.
/// The same quantities at `α = 0` on the same grid are returned alongside.
pub fn nse_qubit_parameters<T: GgpReal>(
    well: &DoubleWell<T>,
    alpha: T,
    d: T,
    eps: T,
    grid: &Grid1D<T>,
) -> Result<NseQubit<T>> {
    if !(alpha >= T::zero()) {
        return Err(domain(format!("alpha must be non-negative, got {alpha}")));
    }
    // α(N − 1) = α: the particle feels its own Newtonian potential once.
    let solve = |a: T| -> Result<(T, T, ggp::TwoModeCoefficients<T>)> {
        let p = GgpProblem::from_well(well, T::zero(), a, T::lit(2.0), eps)?;
        let g0 = ggp::solve_ground_state(&p, grid)?;
        let g1 = ggp::solve_first_excited(&p, grid)?;
        let c = ggp::two_mode_coefficients(&g0, &g1, d, eps)?;
        Ok((g0.mu, g1.mu, c))
    };
    let (mu0, mu1, nse) = solve(alpha)?;
    let (_, _, lin) = solve(T::zero())?;
    let omega_nse = nse.omega;
    let uu_nse = alpha * nse.gamma.gamma_minus;
    Ok(NseQubit {
        model: QubitPairModel::new(omega_nse.max(T::zero()), uu_nse)?,
        omega_nse,
        omega_linear: lin.omega,
        uu_nse,
        uu_linear: alpha * lin.gamma.gamma_minus,
        mu0,
        mu1,
        localization: nse.localization,
    })
}

/// One row of the comparator table.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub model: String,
    /// `Γ/℧` used in the simulation, if any.
    pub rate_over_uu: Option<f64>,
    /// Rabi contrast from the simulation (`None` for table-only entries).
    pub contrast: Option<f64>,
    pub gravcats_survive: bool,
    pub note: String,
}

/// Physical inputs of the comparator table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparatorSetup {
    /// Particle mass (kg), sphere radius (m), axis distance and well
    /// separation (m).
    pub mass: f64,
    pub radius: f64,
    pub d: f64,
    pub l: f64,
    /// ABH noise temperature (Planck units) and energy difference (J).
    pub theta: f64,
    pub delta_e: f64,
    /// `ω/℧` of the simulated pair; the `|e,g⟩ ↔ |g,e⟩` oscillation does not
    /// depend on it without dephasing.
    pub omega_over_uu: f64,
    /// Rabi periods simulated.
    pub periods: usize,
}

impl Default for ComparatorSetup {
    fn default() -> Self {
        Self {
            mass: 1e10 * CODATA.amu,
            radius: 100e-9,
            d: 1e-6,
            l: 1e-6,
            theta: 1.0,
            delta_e: 1.602_176_634e-19,
            omega_over_uu: 2.0,
            periods: 2,
        }
    }
}

/// Contrast above which oscillations count as observed.
pub const SURVIVAL_CONTRAST: f64 = 0.5;

/// Runs each comparator at its physical `Γ/℧` and classifies survival of
/// the Rabi oscillation. NSE parameters are supplied by the caller (see
/// [`nse_qubit_parameters`]); the NSE dynamics are unitary.
pub fn comparator_table(setup: &ComparatorSetup, nse: Option<&QubitPairModel<f64>>) -> Result<Vec<Verdict>> {
    let uu_si = params::rabi_frequency(params::gravitational_coupling(setup.mass)?.si, setup.d, setup.l)?;
    let model = QubitPairModel::new(setup.omega_over_uu, 1.0)?;
    let run = |ratio: f64, basis: DephasingBasis| -> Result<f64> {
        Ok(rabi_comparison(&model, Dephasing { basis, rate: ratio }, setup.periods, 200)?.contrast)
    };
    let dp = dp_rate(setup.mass, setup.radius)? / uu_si;
    let abh = abh_rate(setup.theta, setup.delta_e)? / uu_si;
    let dp_contrast = run(dp, DephasingBasis::Position)?;
    let abh_contrast = run(abh, DephasingBasis::Energy)?;
    let mut rows = vec![
        Verdict {
            model: "Diosi-Penrose".into(),
            rate_over_uu: Some(dp),
            contrast: Some(dp_contrast),
            gravcats_survive: dp_contrast > SURVIVAL_CONTRAST,
            note: "position-basis dephasing".into(),
        },
        Verdict {
            model: "Anastopoulos-Hu/Blencowe".into(),
            rate_over_uu: Some(abh),
            contrast: Some(abh_contrast),
            gravcats_survive: abh_contrast > SURVIVAL_CONTRAST,
            note: "energy-basis dephasing".into(),
        },
    ];
    if let Some(m) = nse {
        let c =
            rabi_comparison(m, Dephasing { basis: DephasingBasis::Energy, rate: 0.0 }, setup.periods, 200)?.contrast;
        rows.push(Verdict {
            model: "Newton-Schroedinger".into(),
            rate_over_uu: Some(0.0),
            contrast: Some(c),
            gravcats_survive: c > SURVIVAL_CONTRAST,
            note: "unitary with NSE-derived omega and Rabi coupling".into(),
        });
    }
    for name in ["GRW/CSL", "Power-Percival", "Asprea-Gasbarri-Bassi"] {
        rows.push(Verdict {
            model: name.into(),
            rate_over_uu: None,
            contrast: None,
            gravcats_survive: false,
            note: "position-basis collapse or noise; no rate formula, not simulated".into(),
        });
    }
    Ok(rows)
}
