//! Classical large-`N` limit: two coupled rotors on `S² × S²`.
//!
//! Each condensate spin is replaced by `Sx = Nξ`, `Sy = N sqrt(1 − ξ²) sin φ`,
//! `Sz = −N sqrt(1 − ξ²) cos φ` with `{φ, ξ} = 1/N`. Energies are reported in
//! units of `Nω̄`,
//!
//! ```text
//! H/(Nω̄) = −sqrt(1 − ξ1²) cos φ1 − sqrt(1 − ξ2²) cos φ2 + (b/2)(ξ1² + ξ2²) − c ξ1ξ2,
//! ```
//!
//! with `b = Nκ/ω̄` and `c = N℧/ω̄`. Times are in seconds.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{FftNum, FftPlanner};

use crate::error::{domain, Error, Result};
use crate::params;
use crate::scalar::{Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorParams<T> {
    pub n: T,
    pub omega_bar: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> RotorParams<T> {
    pub fn new(n: T, omega_bar: T, b: T, c: T) -> Result<Self> {
        if !(n > T::zero()) || !(omega_bar > T::zero()) || !b.is_finite() || !c.is_finite() || !n.is_finite() {
            return Err(domain(format!("need N > 0, omega_bar > 0 and finite b, c; got ({n}, {omega_bar}, {b}, {c})")));
        }
        Ok(Self { n, omega_bar, b, c })
    }

    /// From the two-mode couplings: `b = Nκ/ω̄`, `c = N℧/ω̄`.
    pub fn from_two_mode(n: T, omega_bar: T, kappa: T, uu: T) -> Result<Self> {
        Self::new(n, omega_bar, n * kappa / omega_bar, n * uu / omega_bar)
    }

    /// `℧ = cω̄/N`.
    pub fn uu(&self) -> T {
        self.c * self.omega_bar / self.n
    }

    /// `1 + b − |c|`; small oscillations are stable when positive.
    pub fn stability_margin(&self) -> T {
        T::one() + self.b - self.c.abs()
    }

    pub fn is_stable(&self) -> bool {
        self.stability_margin() > T::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RotorState<T> {
    pub xi1: T,
    pub phi1: T,
    pub xi2: T,
    pub phi2: T,
}

impl<T: Real> RotorState<T> {
    pub fn new(xi1: T, phi1: T, xi2: T, phi2: T) -> Self {
        Self { xi1, phi1, xi2, phi2 }
    }

    pub fn to_array(self) -> [T; 4] {
        [self.xi1, self.phi1, self.xi2, self.phi2]
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self { xi1: a[0], phi1: a[1], xi2: a[2], phi2: a[3] }
    }

    /// Exchanges the two rotors.
    pub fn swapped(self) -> Self {
        Self { xi1: self.xi2, phi1: self.phi2, xi2: self.xi1, phi2: self.phi1 }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.to_array().iter().zip(other.to_array()).fold(T::zero(), |m, (a, b)| m.max((*a - b).abs()))
    }
}

fn check_xi<T: Real>(xi: T) -> Result<()> {
    if !(xi.abs() <= T::one()) {
        return Err(domain(format!("|xi| must not exceed 1, got {xi}")));
    }
    Ok(())
}

/// `H/(Nω̄)`.
pub fn total_hamiltonian<T: Real>(p: &RotorParams<T>, s: &RotorState<T>) -> Result<T> {
    check_xi(s.xi1)?;
    check_xi(s.xi2)?;
    let half = T::lit(0.5);
    let r1 = (T::one() - s.xi1 * s.xi1).sqrt();
    let r2 = (T::one() - s.xi2 * s.xi2).sqrt();
    Ok(-r1 * s.phi1.cos() - r2 * s.phi2.cos() + half * p.b * (s.xi1 * s.xi1 + s.xi2 * s.xi2) - p.c * s.xi1 * s.xi2)
}

/// Harmonic single-rotor energy `h/(Nω̄) = ½(1 + b)ξ² + ½φ²`.
pub fn rotor_energy<T: Real>(p: &RotorParams<T>, xi: T, phi: T) -> T {
    let half = T::lit(0.5);
    half * (T::one() + p.b) * xi * xi + half * phi * phi
}

/// `(dξ1, dφ1, dξ2, dφ2)/dt` with `ξ̇ = −(1/N)∂H/∂φ`, `φ̇ = (1/N)∂H/∂ξ`.
pub fn equations_of_motion<T: Real>(p: &RotorParams<T>, s: &RotorState<T>) -> Result<[T; 4]> {
    let w = p.omega_bar;
    let one = |xi: T, phi: T, other: T| -> Result<(T, T)> {
        if !(xi.abs() < T::one()) {
            return Err(domain(format!("coordinate singularity at xi = {xi}")));
        }
        let r = (T::one() - xi * xi).sqrt();
        let (sin, cos) = phi.sin_cos();
        Ok((-w * r * sin, w * (xi / r * cos + p.b * xi - p.c * other)))
    };
    let (dx1, dp1) = one(s.xi1, s.phi1, s.xi2)?;
    let (dx2, dp2) = one(s.xi2, s.phi2, s.xi1)?;
    Ok([dx1, dp1, dx2, dp2])
}

/// Substep counts of the extrapolation; four columns give order 8.
const GBS_SEQUENCE: [usize; 4] = [2, 4, 6, 8];

/// One fixed step of the Gragg–Bulirsch–Stoer scheme: modified-midpoint
/// solutions for each substep count, Neville-extrapolated in `h²`.
fn gbs_step<T: Real>(p: &RotorParams<T>, y: [T; 4], h: T) -> Result<[T; 4]> {
    let f = |y: [T; 4]| equations_of_motion(p, &RotorState::from_array(y));
    let f0 = f(y)?;
    let mut table: Vec<[T; 4]> = Vec::with_capacity(GBS_SEQUENCE.len());
    for (j, &n) in GBS_SEQUENCE.iter().enumerate() {
        let hs = h / T::from_usize_(n);
        let mut z0 = y;
        let mut z1 = [T::zero(); 4];
        for i in 0..4 {
            z1[i] = y[i] + hs * f0[i];
        }
        for _ in 1..n {
            let d = f(z1)?;
            let mut z2 = [T::zero(); 4];
            for i in 0..4 {
                z2[i] = z0[i] + T::lit(2.0) * hs * d[i];
            }
            z0 = z1;
            z1 = z2;
        }
        let d = f(z1)?;
        let mut row = [T::zero(); 4];
        for i in 0..4 {
            row[i] = T::lit(0.5) * (z0[i] + z1[i] + hs * d[i]);
        }
        // Neville update in place: table[k] holds T_{j,k}.
        let mut prev = row;
        for k in 1..=j {
            let ratio = T::from_usize_(n) / T::from_usize_(GBS_SEQUENCE[j - k]);
            let denom = ratio * ratio - T::one();
            let mut next = [T::zero(); 4];
            for i in 0..4 {
                next[i] = prev[i] + (prev[i] - table[k - 1][i]) / denom;
            }
            table[k - 1] = std::mem::replace(&mut prev, next);
        }
        table.push(prev);
    }
    Ok(table[GBS_SEQUENCE.len() - 1])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions<T> {
    /// Step in units of `1/ω̄`.
    pub step: T,
    /// Largest tolerated `|H − H0| / max(|H0|, 1)`.
    pub drift_limit: T,
    /// Keep every `stride`-th step (the last is always kept).
    pub stride: usize,
}

impl<T: Real> Default for IntegratorOptions<T> {
    fn default() -> Self {
        Self { step: T::lit(0.05), drift_limit: T::lit(1e-6), stride: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<RotorState<T>>,
    /// `H/(Nω̄)`.
    pub energies: Vec<T>,
    /// `h1/(Nω̄)`, `h2/(Nω̄)` in the harmonic form.
    pub h1: Vec<T>,
    pub h2: Vec<T>,
    /// Largest relative drift of `H` seen at any step.
    pub max_drift: T,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&RotorState<T>> {
        self.states.last()
    }
}

/// Integrates to `t_end` (negative for backward) with step `dt` (seconds).
pub fn integrate<T: Real>(p: &RotorParams<T>, s0: RotorState<T>, t_end: T, dt: T) -> Result<Trajectory<T>> {
    let opts = IntegratorOptions { step: dt.abs() * p.omega_bar, ..IntegratorOptions::default() };
    integrate_with(p, s0, t_end, &opts)
}

pub fn integrate_with<T: Real>(
    p: &RotorParams<T>,
    s0: RotorState<T>,
    t_end: T,
    opts: &IntegratorOptions<T>,
) -> Result<Trajectory<T>> {
    if !p.is_stable() {
        return Err(Error::Unstable(format!("1 + b - |c| = {} is not positive", p.stability_margin())));
    }
    if !(opts.step > T::zero()) || !t_end.is_finite() || opts.stride == 0 {
        return Err(domain("need a positive step, a finite end time and stride >= 1"));
    }
    let h0 = total_hamiltonian(p, &s0)?;
    let dt_max = opts.step / p.omega_bar;
    let steps = (t_end.abs() / dt_max).ceil().to_usize().unwrap_or(0).max(1);
    let h = t_end / T::from_usize_(steps);
    let scale = h0.abs().max(T::one());

    let mut traj = Trajectory {
        times: Vec::with_capacity(steps / opts.stride + 2),
        states: Vec::with_capacity(steps / opts.stride + 2),
        energies: Vec::with_capacity(steps / opts.stride + 2),
        h1: Vec::with_capacity(steps / opts.stride + 2),
        h2: Vec::with_capacity(steps / opts.stride + 2),
        max_drift: T::zero(),
    };
    let record = |traj: &mut Trajectory<T>, t: T, s: RotorState<T>, e: T| {
        traj.times.push(t);
        traj.states.push(s);
        traj.energies.push(e);
        traj.h1.push(rotor_energy(p, s.xi1, s.phi1));
        traj.h2.push(rotor_energy(p, s.xi2, s.phi2));
    };
    record(&mut traj, T::zero(), s0, h0);
    let mut y = s0.to_array();
    for k in 1..=steps {
        let t = h * T::from_usize_(k);
        y = gbs_step(p, y, h).map_err(|_| Error::Singularity { t: t.to_f64_() })?;
        let s = RotorState::from_array(y);
        if !(s.xi1.abs() < T::one() && s.xi2.abs() < T::one()) {
            return Err(Error::Singularity { t: t.to_f64_() });
        }
        let e = total_hamiltonian(p, &s)?;
        let drift = (e - h0).abs() / scale;
        traj.max_drift = traj.max_drift.max(drift);
        if !(drift <= opts.drift_limit) {
            return Err(Error::EnergyDrift { drift: drift.to_f64_(), limit: opts.drift_limit.to_f64_() });
        }
        if k % opts.stride == 0 || k == steps {
            record(&mut traj, t, s, e);
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalModes<T> {
    /// `ω̄ sqrt(1 + b + c)`.
    pub plus: T,
    /// `ω̄ sqrt(1 + b − c)`.
    pub minus: T,
    /// `Ω+ − Ω−`.
    pub delta: T,
    /// Small-`c` expansion `ω̄c/sqrt(1 + b) = N℧/sqrt(1 + b)`.
    pub delta_small_c: T,
    /// The often-quoted `2N℧/sqrt(1 + b)`, twice the expansion above.
    pub delta_quoted: T,
}

pub fn normal_mode_frequencies<T: Real>(p: &RotorParams<T>) -> Result<NormalModes<T>> {
    if !p.is_stable() {
        return Err(Error::Unstable(format!(
            "1 + b - |c| = {} <= 0: one normal mode frequency is imaginary",
            p.stability_margin()
        )));
    }
    let one_b = T::one() + p.b;
    let plus = p.omega_bar * (one_b + p.c).sqrt();
    let minus = p.omega_bar * (one_b - p.c).sqrt();
    let small = p.omega_bar * p.c / one_b.sqrt();
    Ok(NormalModes { plus, minus, delta: plus - minus, delta_small_c: small, delta_quoted: T::lit(2.0) * small })
}

/// Solution of the flow linearised about the minimum: the symmetric
/// combination oscillates at `Ω−`, the antisymmetric one at `Ω+`.
pub fn linear_solution<T: Real>(p: &RotorParams<T>, s0: &RotorState<T>, t: T) -> Result<RotorState<T>> {
    let modes = normal_mode_frequencies(p)?;
    let half = T::lit(0.5);
    let w = p.omega_bar;
    let mode = |x0: T, f0: T, big: T| -> (T, T) {
        let (s, c) = (big * t).sin_cos();
        (x0 * c - w * f0 / big * s, x0 * big / w * s + f0 * c)
    };
    let (xs, fs) = mode(half * (s0.xi1 + s0.xi2), half * (s0.phi1 + s0.phi2), modes.minus);
    let (xa, fa) = mode(half * (s0.xi1 - s0.xi2), half * (s0.phi1 - s0.phi2), modes.plus);
    Ok(RotorState::new(xs + xa, fs + fa, xs - xa, fs - fa))
}

/// Dominant angular frequency of a uniformly sampled signal, below
/// `max_frequency` if given: Hann window, FFT, quadratic interpolation of the
/// peak magnitude.
pub fn dominant_frequency<T: Real + FftNum>(signal: &[T], dt: T, max_frequency: Option<T>) -> Result<T> {
    let n = signal.len();
    if n < 16 || !(dt > T::zero()) {
        return Err(domain("need at least 16 samples and a positive spacing"));
    }
    let mean = signal.iter().copied().sum::<T>() / T::from_usize_(n);
    let mut buf: Vec<Complex<T>> = signal
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = T::lit(0.5) * (T::one() - (T::lit(2.0 * PI) * T::from_usize_(i) / T::from_usize_(n - 1)).cos());
            Complex::new((v - mean) * w, T::zero())
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let bin_width = T::lit(2.0 * PI) / (T::from_usize_(n) * dt);
    let top = match max_frequency {
        Some(f) => (f / bin_width).floor().to_usize().unwrap_or(0).min(n / 2),
        None => n / 2,
    };
    let mag: Vec<T> = buf.iter().take(n / 2 + 1).map(|c| c.norm()).collect();
    // Bin 1 carries the window's leakage of any residual trend.
    let (mut best, mut k) = (T::zero(), 0);
    for (i, &m) in mag.iter().enumerate().take(top + 1).skip(2) {
        if m > best {
            best = m;
            k = i;
        }
    }
    if k == 0 {
        return Err(domain("no spectral peak in the requested band"));
    }
    let offset = if k + 1 < mag.len() {
        let (a, b, c) = (mag[k - 1], mag[k], mag[k + 1]);
        let denom = a - T::lit(2.0) * b + c;
        if denom != T::zero() {
            T::lit(0.5) * (a - c) / denom
        } else {
            T::zero()
        }
    } else {
        T::zero()
    };
    Ok((T::from_usize_(k) + offset) * bin_width)
}

/// Beat (energy-exchange) frequency of `h1(t)`. Only frequencies below the
/// slower normal mode are searched, which excludes the `2Ω` ripple.
pub fn beat_frequency<T: Real + FftNum>(p: &RotorParams<T>, traj: &Trajectory<T>) -> Result<T> {
    if traj.len() < 16 {
        return Err(domain("trajectory too short for a spectrum"));
    }
    let dt = traj.times[1] - traj.times[0];
    let modes = normal_mode_frequencies(p)?;
    dominant_frequency(&traj.h1, dt.abs(), Some(modes.minus))
}

/// Early-time energy flow into rotor 1 from an excited rotor 2.
/// Rates are in natural units (`ħ = 1`, energy in rad/s, so rates in s⁻²);
/// [`TransferEstimate::to_si`] converts to J/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferEstimate<T> {
    /// `ω̄N²℧`.
    pub estimate: T,
    /// Least-squares slope of `h1(t)` over `[0, window]`.
    pub fitted_slope: T,
    /// Largest power `Nω̄²|c ξ2 φ1|` through the coupling term during the
    /// first half beat.
    pub peak_rate: T,
    /// `1/sqrt(ω̄δ)`: geometric mean of `1/ω̄` and `1/δ`.
    pub window: T,
    /// Excited-atom count `h1/ω̄` at the end of the window.
    pub excited_count: T,
    /// `N²℧ × window`.
    pub excited_count_estimate: T,
}

impl<T: Real> TransferEstimate<T> {
    /// `fitted_slope / estimate`.
    pub fn ratio(&self) -> T {
        self.fitted_slope / self.estimate
    }

    /// `(estimate, fitted_slope, peak_rate)` in J/s.
    pub fn to_si(&self) -> (f64, f64, f64) {
        let hb = params::CODATA.hbar;
        (hb * self.estimate.to_f64_(), hb * self.fitted_slope.to_f64_(), hb * self.peak_rate.to_f64_())
    }
}

/// Integrates from rotor 1 at rest and rotor 2 at `ξ2 = xi2`, `φ2 = 0`.
pub fn energy_transfer_rate<T: Real>(p: &RotorParams<T>, xi2: T) -> Result<TransferEstimate<T>> {
    let uu = p.uu();
    let estimate = p.omega_bar * p.n * p.n * uu;
    let modes = normal_mode_frequencies(p)?;
    if modes.delta == T::zero() {
        return Ok(TransferEstimate {
            estimate,
            fitted_slope: T::zero(),
            peak_rate: T::zero(),
            window: T::infinity(),
            excited_count: T::zero(),
            excited_count_estimate: T::zero(),
        });
    }
    let half_beat = T::PI() / modes.delta.abs();
    let window = (p.omega_bar * modes.delta.abs()).sqrt().recip();
    let s0 = RotorState::new(T::zero(), T::zero(), xi2, T::zero());
    let opts = IntegratorOptions { step: T::lit(0.01), ..IntegratorOptions::default() };
    let traj = integrate_with(p, s0, half_beat.max(window), &opts)?;
    let scale = p.n * p.omega_bar;

    let (mut st, mut sh, mut stt, mut sth, mut cnt) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    let mut excited = T::zero();
    let mut peak = T::zero();
    for (k, (&t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        let h1 = scale * traj.h1[k];
        if t <= window {
            st += t;
            sh += h1;
            stt += t * t;
            sth += t * h1;
            cnt += T::one();
            excited = h1 / p.omega_bar;
        }
        if t <= half_beat {
            peak = peak.max((scale * p.omega_bar * p.c * s.xi2 * s.phi1).abs());
        }
    }
    let fitted_slope = ((cnt * sth - st * sh) / (cnt * stt - st * st)).abs();
    Ok(TransferEstimate {
        estimate,
        fitted_slope,
        peak_rate: peak,
        window,
        excited_count: excited,
        excited_count_estimate: p.n * p.n * uu * window,
    })
}

/// Excited-atom count `n1 = h1/ω̄` of rotor 1 at time `t`, from rotor 1 at
/// rest and rotor 2 at `ξ2 = xi2`.
pub fn excited_count<T: Real>(p: &RotorParams<T>, xi2: T, t: T) -> Result<T> {
    let s0 = RotorState::new(T::zero(), T::zero(), xi2, T::zero());
    let opts = IntegratorOptions { step: T::lit(0.01), ..IntegratorOptions::default() };
    let traj = integrate_with(p, s0, t, &opts)?;
    Ok(p.n * traj.h1[traj.len() - 1])
}

/// Order-of-magnitude condensate sizes for rubidium with a cat-state size of
/// 100 nm (`d = L = 100 nm`, point-mass `℧`, `b = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeadcountCheck {
    /// Single-atom `℧` (rad/s).
    pub uu_atom: f64,
    /// `N` with `N℧ = 1/(60 s)`.
    pub n_for_minute_beat: f64,
    /// Same with the quoted `δ = 2N℧`.
    pub n_for_minute_beat_quoted: f64,
    /// `N` with `N²℧ · 5 s = 10³`.
    pub n_for_thousand_excited: f64,
    pub claimed_minute_beat: f64,
    pub claimed_thousand_excited: f64,
}

impl HeadcountCheck {
    /// `log10(computed / claimed)` for the two claims.
    pub fn decades(&self) -> (f64, f64) {
        (
            (self.n_for_minute_beat / self.claimed_minute_beat).log10(),
            (self.n_for_thousand_excited / self.claimed_thousand_excited).log10(),
        )
    }

    pub fn within_two_decades(&self) -> bool {
        let (a, b) = self.decades();
        a.abs() <= 2.0 && b.abs() <= 2.0
    }
}

pub fn bec_headcounts() -> Result<HeadcountCheck> {
    let rb = 86.909_180_5 * params::CODATA.amu;
    let size = 100e-9;
    let uu_atom = params::rabi_frequency(params::gravitational_coupling(rb)?.si, size, size)?;
    let delta = 1.0 / 60.0;
    Ok(HeadcountCheck {
        uu_atom,
        n_for_minute_beat: delta / uu_atom,
        n_for_minute_beat_quoted: delta / (2.0 * uu_atom),
        n_for_thousand_excited: (1e3 / (uu_atom * 5.0)).sqrt(),
        claimed_minute_beat: 1e16,
        claimed_thousand_excited: 1e10,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovEstimate<T> {
    /// Largest exponent (1/s).
    pub exponent: T,
    /// `(t, running estimate)` after each renormalisation.
    pub trace: Vec<(T, T)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovOptions<T> {
    /// Initial and renormalised separation.
    pub separation: T,
    /// Renormalisation interval in units of `1/ω̄`.
    pub interval: T,
    pub step: T,
    pub seed: u64,
}

impl<T: Real> Default for LyapunovOptions<T> {
    fn default() -> Self {
        Self { separation: T::lit(1e-8), interval: T::lit(1.0), step: T::lit(0.05), seed: 0 }
    }
}

/// Benettin two-trajectory estimate of the largest Lyapunov exponent.
pub fn lyapunov_estimate<T: Real>(p: &RotorParams<T>, s0: RotorState<T>, t_end: T) -> Result<LyapunovEstimate<T>> {
    lyapunov_with(p, s0, t_end, &LyapunovOptions::default())
}

pub fn lyapunov_with<T: Real>(
    p: &RotorParams<T>,
    s0: RotorState<T>,
    t_end: T,
    opts: &LyapunovOptions<T>,
) -> Result<LyapunovEstimate<T>> {
    if !(t_end > T::zero()) || !(opts.separation > T::zero()) || !(opts.interval > T::zero()) {
        return Err(domain("need positive t_end, separation and interval"));
    }
    total_hamiltonian(p, &s0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut dir = [T::zero(); 4];
    for d in dir.iter_mut() {
        *d = T::lit(rng.random::<f64>() * 2.0 - 1.0);
    }
    let norm = dir.iter().map(|d| *d * *d).sum::<T>().sqrt();
    let y0 = s0.to_array();
    let mut a = y0;
    let mut b = [T::zero(); 4];
    for i in 0..4 {
        b[i] = y0[i] + opts.separation * dir[i] / norm;
    }

    let tau = opts.interval / p.omega_bar;
    let sub = (opts.interval / opts.step).ceil().to_usize().unwrap_or(1).max(1);
    let h = tau / T::from_usize_(sub);
    let blocks = (t_end / tau).ceil().to_usize().unwrap_or(1).max(1);
    let mut sum = T::zero();
    let mut trace = Vec::with_capacity(blocks);
    for k in 1..=blocks {
        for _ in 0..sub {
            a = gbs_step(p, a, h)?;
            b = gbs_step(p, b, h)?;
        }
        let mut dist = T::zero();
        for i in 0..4 {
            dist += (b[i] - a[i]).powi(2);
        }
        let dist = dist.sqrt();
        if !(dist > T::zero()) || !dist.is_finite() {
            return Err(Error::NoConvergence { iterations: k, detail: format!("separation became {dist}") });
        }
        sum += (dist / opts.separation).ln();
        for i in 0..4 {
            b[i] = a[i] + (b[i] - a[i]) * opts.separation / dist;
        }
        let t = tau * T::from_usize_(k);
        trace.push((t, sum / t));
    }
    let exponent = trace.last().map(|x| x.1).unwrap_or_else(T::zero);
    Ok(LyapunovEstimate { exponent, trace })
}

/// Exponent on a grid of `(b, c)` points, in input order.
pub fn lyapunov_map<T: Real>(
    n: T,
    omega_bar: T,
    points: &[(T, T)],
    s0: RotorState<T>,
    t_end: T,
    opts: &LyapunovOptions<T>,
) -> Vec<Result<T>> {
    points
        .par_iter()
        .map(|&(b, c)| {
            let p = RotorParams::new(n, omega_bar, b, c)?;
            Ok(lyapunov_with(&p, s0, t_end, opts)?.exponent)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimum_energy_is_minus_two() {
        let p = RotorParams::new(10.0f64, 1.0, 0.3, 0.1).unwrap();
        assert_eq!(total_hamiltonian(&p, &RotorState::default()).unwrap(), -2.0);
        assert_eq!(equations_of_motion(&p, &RotorState::default()).unwrap(), [0.0; 4]);
    }

    #[test]
    fn direct_arithmetic_case() {
        let p = RotorParams::new(1.0f64, 1.0, 0.0, 0.0).unwrap();
        let e = total_hamiltonian(&p, &RotorState::new(0.0, 0.0, 0.0, 0.5)).unwrap();
        // The coordinate order here is (xi1, phi1, xi2, phi2) = (0, 0, 0, 0.5).
        assert!((e - (-1.0 - 0.5f64.cos())).abs() < 1e-15);
        let e = total_hamiltonian(&p, &RotorState::new(0.0, 0.0, 0.5, 0.0)).unwrap();
        assert!((e - (-1.0 - 0.75f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn out_of_chart() {
        let p = RotorParams::new(1.0f64, 1.0, 0.0, 0.0).unwrap();
        assert!(total_hamiltonian(&p, &RotorState::new(1.5, 0.0, 0.0, 0.0)).is_err());
        assert!(equations_of_motion(&p, &RotorState::new(1.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn gbs_is_eighth_order() {
        // Global error on a fixed interval should fall by ~2^8 per halving.
        let p = RotorParams::new(1.0f64, 1.0, 0.3, 0.2).unwrap();
        let s0 = RotorState::new(0.3, 0.1, -0.2, 0.4);
        let reference = integrate(&p, s0, 4.0, 0.01).unwrap();
        let r = *reference.last().unwrap();
        let err = |dt: f64| integrate(&p, s0, 4.0, dt).unwrap().last().unwrap().max_abs_diff(&r);
        let (e1, e2) = (err(0.4), err(0.2));
        let order = (e1 / e2).log2();
        assert!(order > 7.0, "observed order {order}");
    }

    #[test]
    fn instability_reported() {
        let p = RotorParams::new(1.0f64, 1.0, 0.0, 1.2).unwrap();
        assert!(matches!(normal_mode_frequencies(&p), Err(Error::Unstable(_))));
    }

    #[test]
    fn dominant_frequency_of_a_cosine() {
        let dt = 0.01;
        let w = 3.3;
        let s: Vec<f64> = (0..8192).map(|i| (w * i as f64 * dt).cos()).collect();
        let f = dominant_frequency(&s, dt, None).unwrap();
        assert!((f / w - 1.0).abs() < 5e-3, "{f}");
    }
}
