//! Gravitational Gross-Pitaevskii equation on a uniform 1D grid:
//!
//! `μφ = [−∂²/2m + U + g(N−1)|φ|² − α(N−1)∫|φ(x')|² K(x − x') dx'] φ`,
//! `K(u) = 1/sqrt(u² + ε²)`.
//!
//! `α = 0` is the ordinary GP equation and `g = 0` the Newton-Schrödinger
//! equation. Stationary states come from semi-implicit imaginary-time
//! propagation (kinetic term implicit in Fourier space, mean field explicit
//! with a constant stabiliser) and parity projection; a dense self-consistent iteration is
//! provided as an independent cross-check for small grids.

use std::sync::Arc;

use num_traits::Float;
use rustfft::{Fft, FftNum, FftPlanner};

use crate::error::{domain, Error, Result};
use crate::linalg::symmetric_eigen;
use crate::overlap::{overlap_coefficients, self_overlap_coefficients, ModeFunction, OverlapSet};
use crate::scalar::{Complex, Real};
use crate::semiclassical::{DoubleWell, PotentialFn};

/// Scalars the FFT-based solver can run on.
pub trait GgpReal: Real + FftNum {}
impl<T: Real + FftNum> GgpReal for T {}

/// Cell-centred periodic grid `x_i = x_min + (i + 1/2)h` on `[−X, X]`, so
/// node `i` mirrors node `n − 1 − i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D<T> {
    pub x_min: T,
    pub x_max: T,
    pub n: usize,
    pub spacing: T,
}

impl<T: Real> Grid1D<T> {
    pub fn new(half_width: T, n: usize) -> Result<Self> {
        if n < 64 || !n.is_multiple_of(2) {
            return Err(domain(format!("grid needs an even point count >= 64, got {n}")));
        }
        if !(half_width > T::zero()) {
            return Err(domain("grid half-width must be positive"));
        }
        let spacing = T::lit(2.0) * half_width / T::from_usize_(n);
        Ok(Self { x_min: -half_width, x_max: half_width, n, spacing })
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.n).map(|i| self.x_min + self.spacing * (T::from_usize_(i) + T::lit(0.5))).collect()
    }

    /// Angular wavenumbers in FFT order.
    fn wavenumbers(&self) -> Vec<T> {
        let n = self.n;
        let dk = T::lit(2.0) * T::PI() / (T::from_usize_(n) * self.spacing);
        (0..n)
            .map(|i| {
                let j = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
                dk * T::lit(j)
            })
            .collect()
    }
}

/// A condensate of `N` bosons in an even external potential.
#[derive(Clone)]
pub struct GgpProblem<T> {
    potential: PotentialFn<T>,
    pub m: T,
    /// Curvature frequency at the minima; sets the oscillator length.
    pub omega: T,
    /// Separation of the minima (0 for a single well).
    pub l: T,
    pub g: T,
    pub alpha: T,
    pub n_particles: T,
    pub eps: T,
}

impl<T: Real> std::fmt::Debug for GgpProblem<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GgpProblem")
            .field("m", &self.m)
            .field("omega", &self.omega)
            .field("l", &self.l)
            .field("g", &self.g)
            .field("alpha", &self.alpha)
            .field("n_particles", &self.n_particles)
            .field("eps", &self.eps)
            .finish()
    }
}

impl<T: Real> GgpProblem<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        potential: PotentialFn<T>,
        m: T,
        omega: T,
        l: T,
        g: T,
        alpha: T,
        n_particles: T,
        eps: T,
    ) -> Result<Self> {
        if !(m > T::zero() && omega > T::zero() && l >= T::zero()) {
            return Err(domain("need m, Omega > 0 and L >= 0"));
        }
        if !(n_particles >= T::one()) {
            return Err(domain(format!("particle number must be >= 1, got {n_particles}")));
        }
        if !(eps > T::zero()) {
            return Err(domain(format!("kernel softening must be positive, got {eps}")));
        }
        if !(g >= T::zero() && alpha >= T::zero()) {
            return Err(domain("g and alpha must be non-negative"));
        }
        Ok(Self { potential, m, omega, l, g, alpha, n_particles, eps })
    }

    pub fn from_well(well: &DoubleWell<T>, g: T, alpha: T, n_particles: T, eps: T) -> Result<Self> {
        let w = well.clone();
        let u: PotentialFn<T> = Arc::new(move |x| w.potential(x));
        Self::new(u, well.m(), well.omega(), well.l(), g, alpha, n_particles, eps)
    }

    /// `U = mΩ²x²/2`.
    pub fn harmonic(m: T, omega: T, g: T, alpha: T, n_particles: T, eps: T) -> Result<Self> {
        let k = m * omega * omega / T::lit(2.0);
        let u: PotentialFn<T> = Arc::new(move |x: T| k * x * x);
        Self::new(u, m, omega, T::zero(), g, alpha, n_particles, eps)
    }

    pub fn potential(&self, x: T) -> T {
        (self.potential)(x)
    }

    pub fn length_scale(&self) -> T {
        (self.m * self.omega).sqrt().recip()
    }

    fn contact(&self) -> T {
        self.g * (self.n_particles - T::one())
    }

    fn gravity(&self) -> T {
        self.alpha * (self.n_particles - T::one())
    }

    /// Grid covering `[−L, L]` plus `margin` oscillator lengths.
    pub fn grid(&self, n: usize, margin: T) -> Result<Grid1D<T>> {
        Grid1D::new(self.l + margin * self.length_scale(), n)
    }

    pub fn check_grid(&self, grid: &Grid1D<T>) -> Result<()> {
        let need = self.l + T::lit(4.0) * self.length_scale();
        if grid.x_max < need {
            return Err(Error::Resolution(format!(
                "grid half-width {} must cover L plus 4 oscillator lengths ({need})",
                grid.x_max
            )));
        }
        if grid.spacing > T::lit(0.25) * self.length_scale() {
            return Err(Error::Resolution(format!(
                "grid spacing {} exceeds a quarter oscillator length",
                grid.spacing
            )));
        }
        Ok(())
    }
}

/// Zero-padded FFT convolution with the softened Newtonian kernel.
pub struct NewtonKernel<T: FftNum> {
    n: usize,
    h: T,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    kernel_hat: Vec<Complex<T>>,
}

impl<T: GgpReal> NewtonKernel<T> {
    pub fn new(grid: &Grid1D<T>, eps: T) -> Result<Self> {
        if !(eps > T::zero()) {
            return Err(domain(format!("kernel softening must be positive, got {eps}")));
        }
        let n = grid.n;
        let size = 2 * n;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let h = grid.spacing;
        let mut kernel_hat: Vec<Complex<T>> = (0..size)
            .map(|i| {
                let j = if i < n {
                    i as f64
                } else if i == n {
                    return Complex::new(T::zero(), T::zero());
                } else {
                    i as f64 - size as f64
                };
                let u = h * T::lit(j);
                Complex::new((u * u + eps * eps).sqrt().recip(), T::zero())
            })
            .collect();
        forward.process(&mut kernel_hat);
        Ok(Self { n, h, forward, inverse, kernel_hat })
    }

    /// `−c ∫ ρ(x') K(x − x') dx'` on the grid.
    pub fn apply(&self, density: &[T], coupling: T) -> Vec<T> {
        let size = 2 * self.n;
        let mut buf: Vec<Complex<T>> =
            (0..size).map(|i| Complex::new(if i < self.n { density[i] } else { T::zero() }, T::zero())).collect();
        self.forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= *k;
        }
        self.inverse.process(&mut buf);
        let scale = -coupling * self.h / T::from_usize_(size);
        buf[..self.n].iter().map(|c| c.re * scale).collect()
    }
}

/// `−α_eff ∫ ρ(x') / sqrt((x − x')² + ε²) dx'`, with `α_eff = α(N − 1)` as the
/// caller chooses.
pub fn newtonian_convolution<T: GgpReal>(density: &[T], grid: &Grid1D<T>, eps: T, alpha_eff: T) -> Result<Vec<T>> {
    if density.len() != grid.n {
        return Err(domain(format!("density has {} samples, grid has {}", density.len(), grid.n)));
    }
    Ok(NewtonKernel::new(grid, eps)?.apply(density, alpha_eff))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn project<T: Real>(self, phi: &mut [T]) {
        let n = phi.len();
        let s = match self {
            Parity::Even => T::one(),
            Parity::Odd => -T::one(),
        };
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let a = (phi[i] + s * phi[j]) / T::lit(2.0);
            phi[i] = a;
            phi[j] = s * a;
        }
    }
}

#[derive(Debug, Clone)]
pub struct GgpSolution<T> {
    pub x: Vec<T>,
    pub phi: Vec<T>,
    pub mu: T,
    /// Energy functional per particle.
    pub energy: T,
    /// `max|H_eff[φ]φ − μφ|`.
    pub residual: T,
    pub parity: Parity,
    /// Energy after every accepted step; non-increasing up to `64ε·max(|E|, 1)`
    /// rounding noise.
    pub energy_trace: Vec<T>,
    pub spacing: T,
}

impl<T: Real> GgpSolution<T> {
    pub fn norm_sq(&self) -> T {
        self.phi.iter().map(|&v| v * v).sum::<T>() * self.spacing
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    /// Initial pseudo-time step, halved whenever the energy would rise.
    pub dtau: T,
    pub dtau_min: T,
    /// Stop once the relative energy decrease per step falls below this
    /// and the residual target is met.
    pub energy_tol: T,
    /// Required `residual/|μ|`.
    pub residual_tol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            dtau: T::lit(1.0),
            dtau_min: T::lit(1e-6),
            energy_tol: T::tol(1e-12),
            residual_tol: T::tol(1e-7),
            max_steps: 200_000,
        }
    }
}

/// Per-solve workspace: FFT plans, kinetic multipliers, external potential.
struct Workspace<T: FftNum> {
    problem: GgpProblem<T>,
    grid: Grid1D<T>,
    u: Vec<T>,
    kinetic: Vec<T>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    newton: Option<NewtonKernel<T>>,
}

struct Evaluation<T> {
    energy: T,
    mu: T,
    residual: T,
}

impl<T: GgpReal> Workspace<T> {
    fn new(problem: &GgpProblem<T>, grid: &Grid1D<T>) -> Result<Self> {
        problem.check_grid(grid)?;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.n);
        let inverse = planner.plan_fft_inverse(grid.n);
        let two_m = T::lit(2.0) * problem.m;
        let kinetic = grid.wavenumbers().into_iter().map(|k| k * k / two_m).collect();
        let u = grid.points().into_iter().map(|x| problem.potential(x)).collect();
        let newton = if problem.gravity() > T::zero() { Some(NewtonKernel::new(grid, problem.eps)?) } else { None };
        Ok(Self { problem: problem.clone(), grid: *grid, u, kinetic, forward, inverse, newton })
    }

    fn h(&self) -> T {
        self.grid.spacing
    }

    /// `U + g(N−1)φ² + Φ[φ²]`.
    fn effective_potential(&self, phi: &[T]) -> Vec<T> {
        let rho: Vec<T> = phi.iter().map(|&v| v * v).collect();
        let c = self.problem.contact();
        let mut v: Vec<T> = self.u.iter().zip(&rho).map(|(&u, &r)| u + c * r).collect();
        if let Some(k) = &self.newton {
            for (vi, p) in v.iter_mut().zip(k.apply(&rho, self.problem.gravity())) {
                *vi += p;
            }
        }
        v
    }

    fn kinetic_apply(&self, phi: &[T], f: impl Fn(T) -> T) -> Vec<T> {
        let n = self.grid.n;
        let mut buf: Vec<Complex<T>> = phi.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.forward.process(&mut buf);
        for (b, &k) in buf.iter_mut().zip(&self.kinetic) {
            *b *= f(k);
        }
        self.inverse.process(&mut buf);
        let s = T::from_usize_(n).recip();
        buf.iter().map(|c| c.re * s).collect()
    }

    fn normalize(&self, phi: &mut [T]) {
        let norm = (phi.iter().map(|&v| v * v).sum::<T>() * self.h()).sqrt();
        for v in phi.iter_mut() {
            *v /= norm;
        }
    }

    fn evaluate(&self, phi: &[T]) -> Evaluation<T> {
        let h = self.h();
        let tphi = self.kinetic_apply(phi, |k| k);
        let rho: Vec<T> = phi.iter().map(|&v| v * v).collect();
        let kin: T = phi.iter().zip(&tphi).map(|(&a, &b)| a * b).sum::<T>() * h;
        let ext: T = self.u.iter().zip(&rho).map(|(&u, &r)| u * r).sum::<T>() * h;
        let quartic: T = rho.iter().map(|&r| r * r).sum::<T>() * h;
        let grav = match &self.newton {
            Some(k) => {
                let p = k.apply(&rho, self.problem.gravity());
                p.iter().zip(&rho).map(|(&a, &b)| a * b).sum::<T>() * h
            }
            None => T::zero(),
        };
        let c = self.problem.contact();
        let half = T::lit(0.5);
        let energy = kin + ext + half * c * quartic + half * grav;
        let mu = kin + ext + c * quartic + grav;
        let veff = self.effective_potential(phi);
        let residual =
            (0..phi.len()).map(|i| Float::abs(tphi[i] + veff[i] * phi[i] - mu * phi[i])).fold(T::zero(), Float::max);
        Evaluation { energy, mu, residual }
    }

    fn initial_guess(&self, parity: Parity) -> Vec<T> {
        let mw = self.problem.m * self.problem.omega;
        let half = self.problem.l / T::lit(2.0);
        let mut phi: Vec<T> = self
            .grid
            .points()
            .into_iter()
            .map(|x| {
                let r = (-mw * (x - half).powi(2) / T::lit(2.0)).exp();
                let l = (-mw * (x + half).powi(2) / T::lit(2.0)).exp();
                match parity {
                    Parity::Even => r + l,
                    Parity::Odd if half > T::zero() => r - l,
                    Parity::Odd => x * r,
                }
            })
            .collect();
        self.normalize(&mut phi);
        phi
    }

    /// One semi-implicit step
    /// `(1 + Δτ(T + c))φ' = (1 + Δτc)φ − Δτ(V_eff[φ] − μ)φ` with
    /// `c = (max V + min V)/2`. Its fixed points satisfy the stationary
    /// equation exactly, whatever Δτ.
    fn step(&self, phi: &[T], mu: T, dtau: T, parity: Parity) -> Vec<T> {
        let v = self.effective_potential(phi);
        let (lo, hi) = v.iter().fold((T::infinity(), T::neg_infinity()), |(a, b), &x| (a.min(x), b.max(x)));
        let c = (lo + hi) / T::lit(2.0);
        let rhs: Vec<T> = phi.iter().zip(&v).map(|(&p, &vi)| p + dtau * (c + mu - vi) * p).collect();
        let mut out = self.kinetic_apply(&rhs, |k| (T::one() + dtau * (k + c)).recip());
        parity.project(&mut out);
        self.normalize(&mut out);
        out
    }

    fn fix_sign(&self, phi: &mut [T], parity: Parity) {
        let n = phi.len();
        let s: T = match parity {
            Parity::Even => phi.iter().copied().sum(),
            Parity::Odd => phi[n / 2..].iter().copied().sum(),
        };
        if s < T::zero() {
            for v in phi.iter_mut() {
                *v = -*v;
            }
        }
    }

    fn imaginary_time(&self, parity: Parity, opts: &SolverOptions<T>) -> Result<GgpSolution<T>> {
        let mut phi = self.initial_guess(parity);
        let mut ev = self.evaluate(&phi);
        let mut trace = vec![ev.energy];
        let mut dtau = opts.dtau;
        let mut steps = 0usize;
        let roundoff = T::lit(64.0) * T::epsilon();
        let tail = |trace: &[T]| format!("{:?}", &trace[trace.len().saturating_sub(5)..]);
        loop {
            if steps >= opts.max_steps {
                return Err(Error::NoConvergence {
                    iterations: steps,
                    detail: format!("residual {}; energy trace tail {}", ev.residual / Float::abs(ev.mu), tail(&trace)),
                });
            }
            steps += 1;
            let next = self.step(&phi, ev.mu, dtau, parity);
            let nev = self.evaluate(&next);
            let scale = Float::abs(ev.energy).max(T::one());
            let decrease = ev.energy - nev.energy;
            if decrease < -roundoff * scale {
                dtau /= T::lit(2.0);
                if dtau < opts.dtau_min {
                    return Err(Error::NoConvergence {
                        iterations: steps,
                        detail: format!("energy rises even at step {dtau}; trace tail {}", tail(&trace)),
                    });
                }
                continue;
            }
            phi = next;
            ev = nev;
            trace.push(ev.energy);
            if decrease < opts.energy_tol * scale && ev.residual < opts.residual_tol * Float::abs(ev.mu) {
                break;
            }
        }
        self.fix_sign(&mut phi, parity);
        Ok(GgpSolution {
            x: self.grid.points(),
            phi,
            mu: ev.mu,
            energy: ev.energy,
            residual: ev.residual,
            parity,
            energy_trace: trace,
            spacing: self.h(),
        })
    }
}

/// Parity-even stationary state of lowest energy.
pub fn solve_ground_state<T: GgpReal>(problem: &GgpProblem<T>, grid: &Grid1D<T>) -> Result<GgpSolution<T>> {
    solve_with(problem, grid, Parity::Even, &SolverOptions::default())
}

/// Lowest parity-odd stationary state.
pub fn solve_first_excited<T: GgpReal>(problem: &GgpProblem<T>, grid: &Grid1D<T>) -> Result<GgpSolution<T>> {
    solve_with(problem, grid, Parity::Odd, &SolverOptions::default())
}

pub fn solve_with<T: GgpReal>(
    problem: &GgpProblem<T>,
    grid: &Grid1D<T>,
    parity: Parity,
    opts: &SolverOptions<T>,
) -> Result<GgpSolution<T>> {
    Workspace::new(problem, grid)?.imaginary_time(parity, opts)
}

/// Independent route: freeze the mean field, diagonalise the dense
/// spectral Hamiltonian in the parity sector, mix, repeat. Limited to small
/// grids.
pub fn solve_self_consistent<T: GgpReal>(
    problem: &GgpProblem<T>,
    grid: &Grid1D<T>,
    parity: Parity,
    max_iterations: usize,
) -> Result<GgpSolution<T>> {
    if grid.n > 1024 {
        return Err(Error::DimensionTooLarge { dim: grid.n });
    }
    let ws = Workspace::new(problem, grid)?;
    let n = grid.n;
    let half = n / 2;
    let x = grid.points();
    // Circulant spectral kinetic matrix: t(Δ) = (1/n) Σ_k (k²/2m) cos(kΔh).
    let ks = grid.wavenumbers();
    let t: Vec<T> = (0..n)
        .map(|d| {
            let dx = grid.spacing * T::from_usize_(d);
            ks.iter().zip(&ws.kinetic).map(|(&k, &e)| e * (k * dx).cos()).sum::<T>() / T::from_usize_(n)
        })
        .collect();
    let sign = match parity {
        Parity::Even => T::one(),
        Parity::Odd => -T::one(),
    };
    let mut phi = ws.initial_guess(parity);
    let mut mu_prev = T::infinity();
    let mix = T::lit(0.5);
    for it in 0..max_iterations {
        let v = ws.effective_potential(&phi);
        // Sector basis (e_i ± e_{n−1−i})/√2 for the right half i ≥ n/2.
        let mut hs = ndarray::Array2::<T>::zeros((half, half));
        for a in 0..half {
            let i = half + a;
            for b in 0..half {
                let j = half + b;
                let jm = n - 1 - j;
                let mut val = t[i.abs_diff(j)] + sign * t[i.abs_diff(jm)];
                if a == b {
                    val += v[i];
                }
                hs[[a, b]] = val;
            }
        }
        let (_, vecs) = symmetric_eigen(&hs)?;
        let mut fresh = vec![T::zero(); n];
        for a in 0..half {
            fresh[half + a] = vecs[[a, 0]];
            fresh[half - 1 - a] = sign * vecs[[a, 0]];
        }
        ws.normalize(&mut fresh);
        let overlap: T = fresh.iter().zip(&phi).map(|(&a, &b)| a * b).sum();
        if overlap < T::zero() {
            for f in fresh.iter_mut() {
                *f = -*f;
            }
        }
        let change = fresh.iter().zip(&phi).map(|(&a, &b)| Float::abs(a - b)).fold(T::zero(), Float::max);
        phi = phi.iter().zip(&fresh).map(|(&a, &b)| (T::one() - mix) * a + mix * b).collect();
        ws.normalize(&mut phi);
        let ev = ws.evaluate(&phi);
        let converged = change < T::tol(1e-11) && Float::abs(ev.mu - mu_prev) < T::tol(1e-13) * Float::abs(ev.mu);
        mu_prev = ev.mu;
        if converged {
            ws.fix_sign(&mut phi, parity);
            return Ok(GgpSolution {
                x,
                phi,
                mu: ev.mu,
                energy: ev.energy,
                residual: ev.residual,
                parity,
                energy_trace: vec![ev.energy],
                spacing: grid.spacing,
            });
        }
        log::trace!("self-consistent iteration {it}: mu = {}, change = {change}", ev.mu);
    }
    Err(Error::NoConvergence { iterations: max_iterations, detail: "self-consistent iteration".into() })
}

/// Coefficients of the two-mode reduction built from `ψ0 = (φ0 + φ1)/√2`.
#[derive(Debug, Clone)]
pub struct TwoModeCoefficients<T> {
    /// `μ1 − μ0`.
    pub omega: T,
    pub delta_0: T,
    pub delta_1: T,
    /// Same-axis coefficients `β±, β0, β1` (softened kernel).
    pub beta: OverlapSet<T>,
    /// Cross-axis coefficients `γ±, γ0, γ1`.
    pub gamma: OverlapSet<T>,
    /// `∫_{x>0} ψ0²`.
    pub localization: T,
    pub mode: ModeFunction<T>,
}

impl<T: Real> TwoModeCoefficients<T> {
    /// `δ− = (δ0 − δ1)/2`.
    pub fn delta_minus(&self) -> T {
        (self.delta_0 - self.delta_1) / T::lit(2.0)
    }

    /// The two-mode picture needs `ψ0` confined to one well.
    pub fn localized(&self) -> bool {
        self.localization > T::lit(0.99)
    }
}

pub fn two_mode_coefficients<T: Real>(
    phi0: &GgpSolution<T>,
    phi1: &GgpSolution<T>,
    d: T,
    eps: T,
) -> Result<TwoModeCoefficients<T>> {
    if phi0.parity != Parity::Even || phi1.parity != Parity::Odd {
        return Err(domain("need an even ground state and an odd excited state"));
    }
    if phi0.x.len() != phi1.x.len() {
        return Err(domain("solutions live on different grids"));
    }
    let n = phi0.phi.len();
    for (f, odd) in [(&phi0.phi, false), (&phi1.phi, true)] {
        let peak = f.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let s = if odd { T::one() } else { -T::one() };
        let defect = (0..n).map(|i| (f[i] + s * f[n - 1 - i]).abs()).fold(T::zero(), T::max) / peak;
        if defect > T::tol(1e-6) {
            return Err(Error::Parity(defect.to_f64_()));
        }
    }
    let psi: Vec<T> = phi0.phi.iter().zip(&phi1.phi).map(|(&a, &b)| (a + b) / T::SQRT_2()).collect();
    let mode = ModeFunction::from_uniform(phi0.x.clone(), psi)?;
    let (delta_0, delta_1) = mode.contact_overlaps();
    Ok(TwoModeCoefficients {
        omega: phi1.mu - phi0.mu,
        delta_0,
        delta_1,
        beta: self_overlap_coefficients(&mode, eps)?,
        gamma: overlap_coefficients(&mode, d)?,
        localization: mode.right_fraction(),
        mode,
    })
}
