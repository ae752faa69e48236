//! Closed-form and barrier-integral approximations to the overlap
//! coefficients, and the 4×4 interaction matrix they feed.

use ndarray::Array2;

use crate::error::{domain, Result};
use crate::overlap::OverlapSet;
use crate::quadrature::composite_rule;
use crate::qubitpair::{EE, EG, GE, GG};
use crate::scalar::Real;
use crate::special::bessel_k0_scaled;

use super::DoubleWell;

/// Asymptotic overlap coefficients for a Gaussian-localised mode.
///
/// `overlaps.gamma_plus ± gamma_minus` come from
/// `γ+ + γ− = sqrt(mΩ/2π) e^{z/4} K0(z/4)` (with `z = mΩd²`) and
/// `γ+ − γ− = 1/d'`. The frequently quoted variants
/// `sqrt(mΩ/π) e^{z/8} K0(z/8)` and `2/d'` are kept alongside for
/// comparison; they do not reduce to the point-mass limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapAsymptotics<T> {
    pub overlaps: OverlapSet<T>,
    pub quoted_sum: T,
    pub quoted_difference: T,
    /// `℧/α = γ−` from the closed forms.
    pub rabi_per_alpha: T,
    /// `(1/2) sqrt(mΩ/π) e^{z/8} K0(z/8) − 1/d'`.
    pub quoted_rabi_per_alpha: T,
}

impl<T: Real> OverlapAsymptotics<T> {
    pub fn refined_rabi(&self, alpha: T) -> T {
        alpha * self.rabi_per_alpha
    }

    pub fn quoted_refined_rabi(&self, alpha: T) -> T {
        alpha * self.quoted_rabi_per_alpha
    }
}

/// Closed-form `γ±` and barrier-integral `γ0, γ1`:
///
/// `γ1 = (mω²/8) ∫∫_{−a}^{a} [(U1 − Ω/2)(U2 − Ω/2)]^{-1/2} K(x1 − x2)`,
/// `γ0 = (ω sqrt(m)/(2√2)) ∫_{−a}^{a} (U − Ω/2)^{-1/2} K(x − L/2)`,
///
/// with `K(u) = 1/sqrt(d² + u²)` and `ω` the tunnelling splitting. The
/// inverse-square-root endpoint singularities are removed by `x = a sin θ`.
pub fn overlap_asymptotics<T: Real>(well: &DoubleWell<T>, d: T, omega_split: T) -> Result<OverlapAsymptotics<T>> {
    if !(d > T::zero()) || !(omega_split >= T::zero()) {
        return Err(domain("need d > 0 and a non-negative splitting"));
    }
    let (m, big_omega, l, a) = (well.m(), well.omega(), well.l(), well.turning_point());
    let half = T::lit(0.5);
    let z = m * big_omega * d * d;
    let dp = (d * d + l * l).sqrt();

    let sum = (m * big_omega / (T::lit(2.0) * T::PI())).sqrt() * bessel_k0_scaled(z / T::lit(4.0));
    let diff = dp.recip();
    let quoted_sum = (m * big_omega / T::PI()).sqrt() * bessel_k0_scaled(z / T::lit(8.0));
    let quoted_difference = T::lit(2.0) / dp;

    let kernel = |u: T| (d * d + u * u).sqrt().recip();
    let level = big_omega / T::lit(2.0);
    let hp = T::FRAC_PI_2();
    let (theta, w) = composite_rule(&[-hp, hp], hp / T::lit(8.0), 16);
    let pts: Vec<(T, T)> = theta
        .iter()
        .zip(&w)
        .map(|(&t, &w)| {
            let x = a * t.sin();
            let jac = a * t.cos();
            let ex = (well.potential(x) - level).max(T::min_positive_value());
            (x, w * jac / ex.sqrt())
        })
        .collect();
    let mut g1 = T::zero();
    let mut g0 = T::zero();
    for &(x1, w1) in &pts {
        let mut inner = T::zero();
        for &(x2, w2) in &pts {
            inner += w2 * kernel(x1 - x2);
        }
        g1 += w1 * inner;
        g0 += w1 * kernel(x1 - l / T::lit(2.0));
    }
    let gamma_1 = m * omega_split * omega_split / T::lit(8.0) * g1;
    let gamma_0 = omega_split * m.sqrt() / (T::lit(2.0) * T::SQRT_2()) * g0;

    let overlaps = OverlapSet { gamma_plus: half * (sum + diff), gamma_minus: half * (sum - diff), gamma_0, gamma_1 };
    Ok(OverlapAsymptotics {
        overlaps,
        quoted_sum,
        quoted_difference,
        rabi_per_alpha: overlaps.gamma_minus,
        quoted_rabi_per_alpha: half * quoted_sum - dp.recip(),
    })
}

/// Interaction Hamiltonian on `{|ee⟩, |gg⟩, |eg⟩, |ge⟩}`:
///
/// ```text
/// ee,ee:  ω − α(γ+ − γ1) − 2α(γ1 + γ0)
/// gg,gg: −ω − α(γ+ − γ1) − 2α(γ1 − γ0)
/// eg,eg = ge,ge: −α(γ+ − γ1)
/// ee,gg = eg,ge: −αγ−
/// ```
///
/// With `γ0 = γ1 = 0` this is the two-qubit Hamiltonian with `℧ = αγ−`,
/// shifted by `−αγ+`.
pub fn interaction_matrix<T: Real>(omega: T, alpha: T, o: &OverlapSet<T>) -> Array2<T> {
    let two = T::lit(2.0);
    let base = -alpha * (o.gamma_plus - o.gamma_1);
    let mut v = Array2::zeros((4, 4));
    v[[EE, EE]] = omega + base - two * alpha * (o.gamma_1 + o.gamma_0);
    v[[GG, GG]] = -omega + base - two * alpha * (o.gamma_1 - o.gamma_0);
    v[[EG, EG]] = base;
    v[[GE, GE]] = base;
    let off = -alpha * o.gamma_minus;
    for (i, j) in [(EE, GG), (EG, GE)] {
        v[[i, j]] = off;
        v[[j, i]] = off;
    }
    v
}

/// Constant offset between [`interaction_matrix`] at `γ0 = γ1 = 0` and the
/// two-qubit Hamiltonian.
pub fn interaction_shift<T: Real>(alpha: T, o: &OverlapSet<T>) -> T {
    -alpha * o.gamma_plus
}

/// Relative size `(ω/Ω)²` of the neglected higher-level admixture.
pub fn perturbative_error<T: Real>(omega: T, big_omega: T) -> T {
    (omega / big_omega).powi(2)
}
