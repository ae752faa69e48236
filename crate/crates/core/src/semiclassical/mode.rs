//! Piecewise Gaussian/WKB approximation to the right-localised mode
//! `ψ0 = (|g⟩ + |e⟩)/√2`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::overlap::{symmetric_rule, GridOptions, ModeFunction};
use crate::quadrature;
use crate::scalar::Real;

use super::{wkb_energy_split, DoubleWell};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeOptions<T> {
    pub grid: GridOptions<T>,
    /// Scan points used to bracket the matching point.
    pub scan: usize,
}

impl<T: Real> Default for ModeOptions<T> {
    fn default() -> Self {
        Self { grid: GridOptions::default(), scan: 400 }
    }
}

/// Where and how the two branches were joined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchDiagnostics<T> {
    /// Matching point, just inside the turning point `a`.
    pub x_match: T,
    pub turning_point: T,
    /// `G(x_m)/W(x_m)` before rescaling: how far the raw WKB branch is off.
    pub raw_ratio: T,
    /// Relative value jump at `x_m` after rescaling.
    pub value_jump: T,
    /// WKB splitting used in the forbidden-region prefactor.
    pub splitting: T,
    pub semiclassical_parameter: T,
}

/// Right-localised mode: the oscillator ground state about `L/2` joined to
/// the decaying WKB solution `sqrt(mω/2)(2m(U − Ω/2))^{-1/4} exp ∫_0^x κ`
/// through the barrier, and zero left of `−a`.
///
/// The WKB branch diverges at the turning point, so the two are joined at
/// the point `x_m < a` where their logarithmic derivatives agree; the WKB
/// branch is rescaled there for continuity.
pub fn semiclassical_mode<T: Real>(
    well: &DoubleWell<T>,
    options: ModeOptions<T>,
) -> Result<(ModeFunction<T>, MatchDiagnostics<T>)> {
    let s = well.semiclassical_parameter();
    if s < T::lit(5.0) {
        log::warn!("sqrt(m Omega) L = {s} is below 5; the semiclassical mode is unreliable");
    }
    let (m, omega, l, a) = (well.m(), well.omega(), well.l(), well.turning_point());
    let half = l / T::lit(2.0);
    let level = omega / T::lit(2.0);
    let splitting = wkb_energy_split(well)?;

    let w_ex = well.clone();
    let excess = move |x: T| (w_ex.potential(x) - level).max(T::min_positive_value());
    let dlog_w = |x: T| well.kappa(x) - well.potential_slope(x) / (T::lit(4.0) * excess(x));
    let dlog_g = |x: T| -m * omega * (x - half);
    let gap = |x: T| dlog_w(x) - dlog_g(x);

    // Scan inward from a: the WKB log-derivative blows up at a, so the gap
    // starts positive; take the first sign change.
    let n = options.scan.max(8);
    let mut bracket = None;
    let mut prev = a * (T::one() - T::lit(0.5) / T::from_usize_(n));
    for k in 1..n {
        let x = a * (T::one() - T::from_usize_(k) / T::from_usize_(n));
        if gap(x) < T::zero() {
            bracket = Some((x, prev));
            break;
        }
        prev = x;
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        Error::Matching("logarithmic derivatives of the Gaussian and WKB branches never cross".into())
    })?;
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let xm = (lo + hi) / T::lit(2.0);

    let w_act = well.clone();
    let action = move |x: T| -> Result<T> {
        let v = quadrature::integrate(|y| w_act.kappa(y), T::zero(), x.abs(), T::tol(1e-12), T::tol(1e-13))
            .map_err(|e| Error::Quadrature(format!("WKB action: {e}")))?
            .value;
        Ok(if x < T::zero() { -v } else { v })
    };
    let pref = (m * splitting / T::lit(2.0)).sqrt();
    let wkb_raw = move |x: T, i: T| pref * (T::lit(2.0) * m * excess(x)).powf(T::lit(-0.25)) * i.exp();
    let gauss_norm = (m * omega / T::PI()).powf(T::lit(0.25));
    let gauss = move |x: T| gauss_norm * (-m * omega * (x - half).powi(2) / T::lit(2.0)).exp();

    let raw_ratio = gauss(xm) / wkb_raw(xm, action(xm)?);
    if !raw_ratio.is_finite() || raw_ratio <= T::zero() {
        return Err(Error::Matching(format!("non-finite branch ratio {raw_ratio} at x = {xm}")));
    }

    let ell = well.length_scale();
    let outer = half + options.grid.margin * ell;
    let bps = [T::zero(), xm, a, outer];
    let (nodes, weights) = symmetric_rule(&bps, options.grid.panel * ell, options.grid.order, Some(1));

    // Cumulative action at the positive nodes inside the barrier, outward.
    let count = nodes.len();
    let first_pos = count / 2;
    let mut actions = vec![T::zero(); count];
    let mut acc = T::zero();
    let mut from = T::zero();
    for i in first_pos..count {
        let x = nodes[i];
        if x >= a {
            break;
        }
        acc += quadrature::integrate(|y| well.kappa(y), from, x, T::tol(1e-12), T::tol(1e-13))
            .map_err(|e| Error::Quadrature(format!("WKB action: {e}")))?
            .value;
        from = x;
        actions[i] = acc;
        actions[count - 1 - i] = -acc;
    }

    let value = |x: T, i: T| {
        if x >= xm {
            gauss(x)
        } else if x > -a {
            raw_ratio * wkb_raw(x, i)
        } else {
            T::zero()
        }
    };
    let values: Vec<T> = nodes.iter().zip(&actions).map(|(&x, &i)| value(x, i)).collect();

    let eps = (a - xm) * T::lit(1e-9);
    let left = raw_ratio * wkb_raw(xm - eps, action(xm - eps)?);
    let right = gauss(xm + eps);
    let value_jump = (left - right).abs() / right;
    if !value_jump.is_finite() || value_jump > T::lit(0.05) {
        return Err(Error::Matching(format!("branches differ by {value_jump} at x = {xm}")));
    }

    let profile = Arc::new(move |x: T| {
        if x >= xm {
            gauss(x)
        } else if x > -a {
            match action(x) {
                Ok(i) => raw_ratio * wkb_raw(x, i),
                Err(_) => T::nan(),
            }
        } else {
            T::zero()
        }
    });
    let mode = ModeFunction::new(nodes, weights, values)?.with_profile(profile);
    let diag = MatchDiagnostics {
        x_match: xm,
        turning_point: a,
        raw_ratio,
        value_jump,
        splitting,
        semiclassical_parameter: s,
    };
    Ok((mode, diag))
}
