//! Semiclassical reduction of a particle in a symmetric double well to a
//! qubit: tunnelling splitting, localised mode function, gravitational
//! overlap coefficients and the resulting 4×4 interaction matrix.
//!
//! Natural units throughout (`ħ = 1`); lengths are usually quoted in
//! oscillator lengths `1/sqrt(mΩ)`.

mod asymptotics;
mod mode;
mod oracle;

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::quadrature;
use crate::scalar::Real;

pub use asymptotics::{
    interaction_matrix, interaction_shift, overlap_asymptotics, perturbative_error, OverlapAsymptotics,
};
pub use mode::{semiclassical_mode, MatchDiagnostics, ModeOptions};
pub use oracle::{fd_levels, schrodinger_splitting_oracle, FdGrid, FdLevels, OracleSpectrum};

pub type PotentialFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// A symmetric double well `U(x) = U(−x)` with minima `U(±L/2) = 0` and
/// curvature `U''(±L/2) = mΩ²`.
#[derive(Clone)]
pub struct DoubleWell<T> {
    potential: PotentialFn<T>,
    m: T,
    l: T,
    omega: T,
    a: T,
    name: String,
}

impl<T: Real> fmt::Debug for DoubleWell<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DoubleWell")
            .field("potential", &self.name)
            .field("m", &self.m)
            .field("l", &self.l)
            .field("omega", &self.omega)
            .field("a", &self.a)
            .finish()
    }
}

impl<T: Real> DoubleWell<T> {
    /// Validates a user potential against the double-well contract and
    /// locates the inner turning point `a`, where `U(a) = Ω/2`.
    pub fn new(potential: PotentialFn<T>, m: T, l: T, omega: T) -> Result<Self> {
        Self::named(potential, m, l, omega, "custom")
    }

    fn named(potential: PotentialFn<T>, m: T, l: T, omega: T, name: &str) -> Result<Self> {
        if !(m > T::zero() && l > T::zero() && omega > T::zero()) {
            return Err(domain(format!("need m, L, Omega > 0, got ({m}, {l}, {omega})")));
        }
        let u = |x: T| potential(x);
        let half = l / T::lit(2.0);
        let scale = m * omega * omega * l * l;
        if u(half).abs() > T::tol(1e-9) * scale {
            return Err(domain(format!("U(L/2) = {} is not zero", u(half))));
        }
        let umax =
            (0..=64).map(|k| u(T::lit(1.5) * half * T::from_usize_(k) / T::lit(64.0)).abs()).fold(T::zero(), T::max);
        for k in 1..=64 {
            let x = T::lit(1.5) * half * T::from_usize_(k) / T::lit(64.0);
            if (u(x) - u(-x)).abs() > T::tol(1e-12) * umax.max(T::one()) {
                return Err(domain(format!("potential is not even at x = {x}")));
            }
        }
        let curv = second_derivative(&u, half, l * T::lit(1e-3));
        let target = m * omega * omega;
        if ((curv - target) / target).abs() > T::tol(1e-4) {
            return Err(domain(format!("U''(L/2) = {curv}, expected m Omega^2 = {target}")));
        }
        let level = omega / T::lit(2.0);
        if u(T::zero()) <= level {
            return Err(domain(format!(
                "barrier U(0) = {} does not exceed the zero-point energy {level}; no forbidden region",
                u(T::zero())
            )));
        }
        // U − Ω/2 changes sign on (0, L/2); bisect for the crossing.
        let (mut lo, mut hi) = (T::zero(), half);
        for _ in 0..200 {
            let mid = (lo + hi) / T::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if u(mid) > level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a = (lo + hi) / T::lit(2.0);
        Ok(Self { potential, m, l, omega, a, name: name.to_string() })
    }

    /// `U(x) = (mΩ²/2L²)(x² − L²/4)²`: minima at `±L/2` with curvature `mΩ²`
    /// and barrier height `mΩ²L²/32`.
    pub fn quartic(m: T, omega: T, l: T) -> Result<Self> {
        let lambda = m * omega * omega / (T::lit(2.0) * l * l);
        let q = l * l / T::lit(4.0);
        let f: PotentialFn<T> = Arc::new(move |x: T| {
            let s = x * x - q;
            lambda * s * s
        });
        Self::named(f, m, l, omega, "quartic")
    }

    pub fn potential(&self, x: T) -> T {
        (self.potential)(x)
    }

    /// `U'(x)` by a fourth-order central difference.
    pub fn potential_slope(&self, x: T) -> T {
        let h = self.length_scale() * T::lit(1e-3);
        let u = |y: T| self.potential(y);
        (u(x - h - h) - T::lit(8.0) * u(x - h) + T::lit(8.0) * u(x + h) - u(x + h + h)) / (T::lit(12.0) * h)
    }

    pub fn m(&self) -> T {
        self.m
    }

    pub fn l(&self) -> T {
        self.l
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    /// Inner turning point, `U(a) = Ω/2`, `0 < a < L/2`.
    pub fn turning_point(&self) -> T {
        self.a
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Oscillator length `1/sqrt(mΩ)`.
    pub fn length_scale(&self) -> T {
        (self.m * self.omega).sqrt().recip()
    }

    /// `sqrt(mΩ)·L`; the semiclassical reduction assumes this is large.
    pub fn semiclassical_parameter(&self) -> T {
        (self.m * self.omega).sqrt() * self.l
    }

    pub fn barrier_height(&self) -> T {
        self.potential(T::zero())
    }

    /// Local decay rate `sqrt(2m(U − Ω/2))` inside the forbidden region.
    pub fn kappa(&self, x: T) -> T {
        let v = self.potential(x) - self.omega / T::lit(2.0);
        (T::lit(2.0) * self.m * v.max(T::zero())).sqrt()
    }
}

fn second_derivative<T: Real, F: Fn(T) -> T>(f: &F, x: T, h: T) -> T {
    (-f(x - h - h) + T::lit(16.0) * f(x - h) - T::lit(30.0) * f(x) + T::lit(16.0) * f(x + h) - f(x + h + h))
        / (T::lit(12.0) * h * h)
}

/// Tunnelling splitting from the WKB formula
/// `ω = ΩL sqrt(mΩ/π) exp ∫_0^{L/2} [Ω sqrt(m/2U) − 1/(L/2 − x) − 2 sqrt(2mU)] dx`.
///
/// The `1/(L/2 − x)` counterterm cancels the harmonic divergence of the first
/// term at the well minimum, so the integrand is bounded.
pub fn wkb_energy_split<T: Real>(well: &DoubleWell<T>) -> Result<T> {
    let (m, w, l) = (well.m, well.omega, well.l);
    let half = l / T::lit(2.0);
    let two = T::lit(2.0);
    let integrand = |x: T| {
        let u = well.potential(x);
        if u <= T::zero() {
            // Only reachable at x = L/2 itself, which Gauss-Kronrod never samples.
            return T::zero();
        }
        w * (m / (two * u)).sqrt() - (half - x).recip() - two * (two * m * u).sqrt()
    };
    let exponent = match quadrature::integrate(integrand, T::zero(), half, T::tol(1e-11), T::zero()) {
        Ok(r) => r.value,
        // Rounding in U near the minimum limits how far the cancellation can
        // be resolved; accept a looser tolerance before giving up.
        Err(_) => {
            quadrature::integrate(integrand, T::zero(), half, T::tol(1e-7), T::zero())
                .map_err(|e| Error::Quadrature(format!("WKB exponent: {e}")))?
                .value
        }
    };
    Ok(w * l * (m * w / T::PI()).sqrt() * exponent.exp())
}
