//! Mode functions on symmetric quadrature grids and the gravitational and
//! contact overlap integrals built from them.
//!
//! Every coefficient is a double integral of products of
//! `A(x) = ψ0²(x)`, `Ā(x) = ψ0²(−x)` and `P(x) = ψ0(x)ψ0(−x)` against a
//! kernel `K(x1 − x2)`, so one pass over the grid yields all of them.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::quadrature::composite_rule;
use crate::scalar::Real;

/// Composite Gauss-Legendre layout used for localised mode functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions<T> {
    /// Points per panel.
    pub order: usize,
    /// Maximum panel width, oscillator lengths.
    pub panel: T,
    /// Extent beyond `±L/2`, oscillator lengths.
    pub margin: T,
}

impl<T: Real> Default for GridOptions<T> {
    fn default() -> Self {
        Self { order: 16, panel: T::lit(0.5), margin: T::lit(10.0) }
    }
}

impl<T: Real> GridOptions<T> {
    /// Same layout with twice as many points per unit length.
    pub fn refined(self) -> Self {
        Self { panel: self.panel / T::lit(2.0), ..self }
    }
}

pub type Profile<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Real samples of `ψ0` on a grid symmetric about the origin: node `i` and
/// node `n − 1 − i` are mirror images with equal weights.
#[derive(Clone)]
pub struct ModeFunction<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub values: Vec<T>,
    /// `∫ψ0²` of the unnormalised construction (values are rescaled to 1).
    pub normalization: T,
    profile: Option<Profile<T>>,
}

impl<T: fmt::Debug> fmt::Debug for ModeFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModeFunction")
            .field("points", &self.nodes.len())
            .field("normalization", &self.normalization)
            .field("has_profile", &self.profile.is_some())
            .finish()
    }
}

impl<T: Real> ModeFunction<T> {
    /// Normalises `values` over the given rule. Fails if the grid is not
    /// mirror-symmetric or the function vanishes.
    pub fn new(nodes: Vec<T>, weights: Vec<T>, values: Vec<T>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 || weights.len() != n || values.len() != n {
            return Err(domain(format!(
                "grid size mismatch: {} nodes, {} weights, {} values",
                n,
                weights.len(),
                values.len()
            )));
        }
        let span = nodes.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        for i in 0..n / 2 {
            let j = n - 1 - i;
            if (nodes[i] + nodes[j]).abs() > T::tol(1e-12) * span
                || (weights[i] - weights[j]).abs() > T::tol(1e-12) * weights[i].abs()
            {
                return Err(domain(format!("grid is not mirror-symmetric at node {i}")));
            }
        }
        let norm: T = weights.iter().zip(&values).map(|(&w, &v)| w * v * v).sum();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::Unnormalized { norm_sq: norm.to_f64_() });
        }
        let s = norm.sqrt().recip();
        let values = values.into_iter().map(|v| v * s).collect();
        Ok(Self { nodes, weights, values, normalization: norm, profile: None })
    }

    /// Attaches the continuous profile the samples were drawn from; it is
    /// rescaled by the same normalisation.
    pub fn with_profile(mut self, profile: Profile<T>) -> Self {
        let s = self.normalization.sqrt().recip();
        self.profile = Some(Arc::new(move |x| profile(x) * s));
        self
    }

    /// Uniform symmetric grid with spacing `h`, as produced by grid solvers.
    pub fn from_uniform(x: Vec<T>, values: Vec<T>) -> Result<Self> {
        if x.len() < 2 {
            return Err(domain("need at least two samples"));
        }
        let h = (x[x.len() - 1] - x[0]) / T::from_usize_(x.len() - 1);
        let w = vec![h; x.len()];
        Self::new(x, w, values)
    }

    /// Harmonic-oscillator ground state centred on the right minimum,
    /// `(mΩ/π)^{1/4} exp(−mΩ(x − L/2)²/2)`.
    pub fn gaussian(m: T, omega: T, l: T, opts: GridOptions<T>) -> Result<Self> {
        if !(m > T::zero() && omega > T::zero() && l >= T::zero()) {
            return Err(domain("need m, Omega > 0 and L >= 0"));
        }
        let ell = (m * omega).sqrt().recip();
        let half = l / T::lit(2.0);
        let outer = half + opts.margin * ell;
        let mut bps = vec![T::zero()];
        if half > T::zero() {
            bps.push(half);
        }
        bps.push(outer);
        let (nodes, weights) = symmetric_rule(&bps, opts.panel * ell, opts.order, None);
        let mw = m * omega;
        let c = (mw / T::PI()).powf(T::lit(0.25));
        let f = move |x: T| c * (-mw * (x - half).powi(2) / T::lit(2.0)).exp();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Ok(Self::new(nodes, weights, values)?.with_profile(Arc::new(f)))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Value of the continuous profile, when one is attached.
    pub fn eval(&self, x: T) -> Option<T> {
        self.profile.as_ref().map(|p| p(x))
    }

    pub fn norm_sq(&self) -> T {
        self.weights.iter().zip(&self.values).map(|(&w, &v)| w * v * v).sum()
    }

    fn mirrored(&self, i: usize) -> T {
        self.values[self.values.len() - 1 - i]
    }

    /// `∫_{x>0} ψ0²`.
    pub fn right_fraction(&self) -> T {
        (0..self.len())
            .filter(|&i| self.nodes[i] > T::zero())
            .map(|i| self.weights[i] * self.values[i] * self.values[i])
            .sum()
    }

    /// `⟨ψ0(x), ψ0(−x)⟩`.
    pub fn mirror_overlap(&self) -> T {
        (0..self.len()).map(|i| self.weights[i] * self.values[i] * self.mirrored(i)).sum()
    }

    /// Largest `|ψ0(x) ± ψ0(−x)|` relative to `max|ψ0|`, with the sign chosen
    /// by `odd`; zero for an exactly even (odd) function.
    pub fn parity_defect(&self, odd: bool) -> T {
        let peak = self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let s = if odd { T::one() } else { -T::one() };
        (0..self.len()).map(|i| (self.values[i] + s * self.mirrored(i)).abs()).fold(T::zero(), T::max) / peak
    }

    /// Contact integrals `δ0 = ∫ψ0⁴` and `δ1 = ∫ψ0²(x)ψ0²(−x)`.
    pub fn contact_overlaps(&self) -> (T, T) {
        let mut d0 = T::zero();
        let mut d1 = T::zero();
        for i in 0..self.len() {
            let a = self.values[i] * self.values[i];
            let b = self.mirrored(i) * self.mirrored(i);
            d0 += self.weights[i] * a * a;
            d1 += self.weights[i] * a * b;
        }
        (d0, d1)
    }

    /// The four kernel moments `∫∫ f(x1) K(x1 − x2) g(x2)` for
    /// `(f, g) ∈ {(A, A), (A, Ā), (A, P), (P, P)}`.
    pub fn kernel_moments<K: Fn(T) -> T + Sync>(&self, kernel: K) -> KernelMoments<T> {
        let n = self.len();
        let a: Vec<T> = (0..n).map(|i| self.weights[i] * self.values[i] * self.values[i]).collect();
        let ab: Vec<T> = (0..n).map(|i| a[n - 1 - i]).collect();
        let p: Vec<T> = (0..n).map(|i| self.weights[i] * self.values[i] * self.mirrored(i)).collect();
        let rows: Vec<[T; 4]> = (0..n)
            .into_par_iter()
            .map(|i| {
                let xi = self.nodes[i];
                let (mut ka, mut kab, mut kp) = (T::zero(), T::zero(), T::zero());
                for j in 0..n {
                    let k = kernel(xi - self.nodes[j]);
                    ka += k * a[j];
                    kab += k * ab[j];
                    kp += k * p[j];
                }
                [a[i] * ka, a[i] * kab, a[i] * kp, p[i] * kp]
            })
            .collect();
        let mut m = [T::zero(); 4];
        for r in &rows {
            for k in 0..4 {
                m[k] += r[k];
            }
        }
        KernelMoments { aa: m[0], a_abar: m[1], a_p: m[2], p_p: m[3] }
    }
}

/// Builds a mirror-symmetric rule from breakpoints `0 = b0 < b1 < …` on the
/// positive half-line. Interval `graded` (if any) uses the substitution
/// `x = b_{k+1} − (b_{k+1} − b_k) s⁴`, which clusters nodes at its right end;
/// its mirror image then clusters at the left end of the reflected interval.
pub(crate) fn symmetric_rule<T: Real>(
    breakpoints: &[T],
    panel: T,
    order: usize,
    graded: Option<usize>,
) -> (Vec<T>, Vec<T>) {
    let mut pos_x = Vec::new();
    let mut pos_w = Vec::new();
    for (k, pair) in breakpoints.windows(2).enumerate() {
        let (lo, hi) = (pair[0], pair[1]);
        if hi <= lo {
            continue;
        }
        if graded == Some(k) {
            let span = hi - lo;
            let (s, ws) = composite_rule(&[T::zero(), T::one()], T::lit(0.25), order);
            let mut block: Vec<(T, T)> =
                s.iter().zip(&ws).map(|(&s, &w)| (hi - span * s.powi(4), w * T::lit(4.0) * span * s.powi(3))).collect();
            block.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
            for (x, w) in block {
                pos_x.push(x);
                pos_w.push(w);
            }
        } else {
            let (x, w) = composite_rule(&[lo, hi], panel, order);
            pos_x.extend(x);
            pos_w.extend(w);
        }
    }
    let mut nodes: Vec<T> = pos_x.iter().rev().map(|&x| -x).collect();
    let mut weights: Vec<T> = pos_w.iter().rev().copied().collect();
    nodes.extend(pos_x);
    weights.extend(pos_w);
    (nodes, weights)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelMoments<T> {
    pub aa: T,
    pub a_abar: T,
    pub a_p: T,
    pub p_p: T,
}

/// Gravitational overlap coefficients (inverse lengths).
///
/// `γ± = ½∫∫ A(x1)[A(x2) ± Ā(x2)] K`, `γ0 = ∫∫ A P K`, `γ1 = ∫∫ P P K` with
/// `K = 1/sqrt(d² + (x1 − x2)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSet<T> {
    pub gamma_plus: T,
    pub gamma_minus: T,
    pub gamma_0: T,
    pub gamma_1: T,
}

impl<T: Real> OverlapSet<T> {
    pub fn from_moments(m: KernelMoments<T>) -> Self {
        let half = T::lit(0.5);
        Self {
            gamma_plus: half * (m.aa + m.a_abar),
            gamma_minus: half * (m.aa - m.a_abar),
            gamma_0: m.a_p,
            gamma_1: m.p_p,
        }
    }

    /// Largest relative difference between two sets, taken over the
    /// dominant pair and, scaled by `γ−`, the small ones.
    pub fn max_rel_diff(&self, other: &Self) -> T {
        let rel = |a: T, b: T, s: T| (a - b).abs() / s.abs().max(T::min_positive_value());
        rel(self.gamma_plus, other.gamma_plus, self.gamma_plus)
            .max(rel(self.gamma_minus, other.gamma_minus, self.gamma_minus))
            .max(rel(self.gamma_0, other.gamma_0, self.gamma_0.abs().max(self.gamma_minus * T::lit(1e-12))))
            .max(rel(self.gamma_1, other.gamma_1, self.gamma_1.abs().max(self.gamma_minus * T::lit(1e-12))))
    }
}

/// `γ±, γ0, γ1` of `mode` for axis separation `d`.
pub fn overlap_coefficients<T: Real>(mode: &ModeFunction<T>, d: T) -> Result<OverlapSet<T>> {
    if !(d > T::zero()) {
        return Err(domain(format!("axis separation must be positive, got {d}")));
    }
    let d2 = d * d;
    Ok(OverlapSet::from_moments(mode.kernel_moments(|u| (d2 + u * u).sqrt().recip())))
}

/// Same-axis self-interaction coefficients `β±, β0, β1` with the softened
/// kernel `1/sqrt((x1 − x2)² + ε²)`.
pub fn self_overlap_coefficients<T: Real>(mode: &ModeFunction<T>, eps: T) -> Result<OverlapSet<T>> {
    overlap_coefficients(mode, eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mode_is_normalised_and_localised() {
        let g = ModeFunction::gaussian(1.0f64, 1.0, 10.0, GridOptions::default()).unwrap();
        assert!((g.norm_sq() - 1.0).abs() < 1e-13);
        assert!((g.normalization - 1.0).abs() < 1e-12);
        assert!(g.right_fraction() > 0.999_999);
        assert!(g.mirror_overlap() < (-25.0f64 / 2.0).exp() * 1.01);
    }

    #[test]
    fn asymmetric_grid_rejected() {
        let r = ModeFunction::new(vec![-1.0, 0.5], vec![1.0, 1.0], vec![1.0, 1.0]);
        assert!(r.is_err());
    }

    #[test]
    fn gaussian_contact_integral() {
        // δ0 of a Gaussian density with σ² = 1/(2mΩ) is 1/(2σ sqrt π).
        let g = ModeFunction::gaussian(2.0f64, 1.5, 12.0, GridOptions::default()).unwrap();
        let (d0, d1) = g.contact_overlaps();
        let sigma = (1.0f64 / (2.0 * 3.0)).sqrt();
        assert!((d0 - 1.0 / (2.0 * sigma * std::f64::consts::PI.sqrt())).abs() < 1e-10);
        assert!(d1 / d0 < 1e-6);
    }

    #[test]
    fn graded_panel_integrates_inverse_sqrt_edge() {
        // ∫_{0}^{1} (1 − x)^{-1/2} dx = 2 with nodes clustered at x = 1; the
        // tolerance reflects rounding of 1 − x at the innermost nodes.
        let (x, w) = symmetric_rule(&[0.0f64, 1.0], 0.25, 12, Some(0));
        let v: f64 = x.iter().zip(&w).filter(|(x, _)| **x > 0.0).map(|(x, w)| w / (1.0 - x).sqrt()).sum();
        assert!((v - 2.0).abs() < 1e-7, "{v}");
    }
}
