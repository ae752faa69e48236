//! Finite-difference ground truth for the double-well spectrum.

use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;
use crate::scalar::Real;

use super::DoubleWell;

/// Dirichlet box `[−L/2 − margin, L/2 + margin]` sampled with the given
/// spacing; both are in oscillator lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGrid<T> {
    pub margin: T,
    pub spacing: T,
}

impl<T: Real> Default for FdGrid<T> {
    fn default() -> Self {
        Self { margin: T::lit(10.0), spacing: T::lit(1.0 / 400.0) }
    }
}

/// Lowest three levels of `−∂²/2m + U` and the tunnelling doublet.
#[derive(Debug, Clone)]
pub struct OracleSpectrum<T> {
    pub e_g: T,
    pub e_e: T,
    pub e_2: T,
    /// `E_e − E_g`.
    pub splitting: T,
    /// `(E_e − E_g)/(E_2 − E_g)`; the two-level picture needs this small.
    pub validity_ratio: T,
    /// Largest level shift under grid halving, in units of `Ω`.
    pub drift: T,
    /// Fine grid, symmetric about 0 with a node at the centre.
    pub x: Vec<T>,
    pub spacing: T,
    /// Ground and first excited states, `Σ φ² h = 1`, positive at `x = L/2`.
    pub phi_g: Vec<T>,
    pub phi_e: Vec<T>,
    /// `Σ φ(x)φ(−x) h`: `+1` for even, `−1` for odd.
    pub parity_g: T,
    pub parity_e: T,
}

/// Lowest eigenpairs of a finite-difference Hamiltonian.
#[derive(Debug, Clone)]
pub struct FdLevels<T> {
    pub values: Vec<T>,
    /// Unit Euclidean norm (multiply by `h^{-1/2}` for `∫φ² = 1`).
    pub vectors: Vec<Vec<T>>,
    pub x: Vec<T>,
    pub h: T,
}

/// `count` lowest levels of `−∂²/2m + U` on `n` interior points of the
/// Dirichlet box `[−half_width, half_width]`, for any potential.
pub fn fd_levels<T: Real, F: Fn(T) -> T>(potential: F, m: T, half_width: T, n: usize, count: usize) -> FdLevels<T> {
    let n = n.max(2);
    let h = T::lit(2.0) * half_width / T::from_usize_(n + 1);
    let x: Vec<T> = (0..n).map(|i| -half_width + h * T::from_usize_(i + 1)).collect();
    let kin = (T::lit(2.0) * m * h * h).recip();
    let diag: Vec<T> = x.iter().map(|&xi| kin + kin + potential(xi)).collect();
    let off = vec![-kin; n - 1];
    let t = SymTridiagonal::new(diag, off).expect("n >= 2");
    let (values, vectors) = t.lowest(count);
    FdLevels { values, vectors, x, h }
}

/// Even/odd sector solution of a symmetric well on `n` (odd) interior points.
struct Doublet<T> {
    e_g: T,
    splitting: T,
    e_2: T,
    phi_g: Vec<T>,
    phi_e: Vec<T>,
    x: Vec<T>,
    h: T,
}

/// Splits the symmetric finite-difference Hamiltonian into parity sectors
/// about the centre node `c`. The even sector keeps `φ_c` (rescaled by
/// `1/√2` to stay symmetric), the odd sector has `χ_c = 0`. Each sector has a
/// well-separated spectrum, and the splitting follows from the discrete
/// Wronskian identity `E_e − E_g = k χ_{c+1} φ_c / Σ_{i>c} χ_i φ_i`, which
/// avoids subtracting two nearly equal eigenvalues.
fn doublet<T: Real>(well: &DoubleWell<T>, half_width: T, n: usize) -> Doublet<T> {
    let n = if n.is_multiple_of(2) { n + 1 } else { n };
    let c = n / 2;
    let h = T::lit(2.0) * half_width / T::from_usize_(n + 1);
    let x: Vec<T> = (0..n).map(|i| h * (T::from_usize_(i) - T::from_usize_(c))).collect();
    let k = (T::lit(2.0) * well.m() * h * h).recip();
    let diag = |i: usize| k + k + well.potential(x[i]);

    let even_diag: Vec<T> = (c..n).map(diag).collect();
    let mut even_off = vec![-k; n - 1 - c];
    even_off[0] = -k * T::SQRT_2();
    let even = SymTridiagonal::new(even_diag, even_off).expect("at least two points per sector");
    let (ev, evec) = even.lowest(2);

    let odd_diag: Vec<T> = (c + 1..n).map(diag).collect();
    let odd = SymTridiagonal::new(odd_diag, vec![-k; n - 2 - c]).expect("at least two points per sector");
    let (ov, ovec) = odd.lowest(2);

    // Full-grid samples with φ_c restored from the symmetrised variable.
    let mut phi: Vec<T> = evec[0].clone();
    phi[0] *= T::SQRT_2();
    let chi = &ovec[0];
    let num = k * chi[0] * phi[0];
    let den: T = chi.iter().zip(&phi[1..]).map(|(&a, &b)| a * b).sum();
    let splitting = num / den;

    let expand = |half: &[T], odd: bool| -> Vec<T> {
        let mut full = vec![T::zero(); n];
        let offset = if odd { 1 } else { 0 };
        for (j, &v) in half.iter().enumerate() {
            let i = c + offset + j;
            full[i] = v;
            full[2 * c - i] = if odd { -v } else { v };
        }
        full
    };
    Doublet { e_g: ev[0], splitting, e_2: ev[1].min(ov[1]), phi_g: expand(&phi, false), phi_e: expand(chi, true), x, h }
}

/// Diagonalises the three-point finite-difference Hamiltonian on `grid` and
/// on a grid of half the spacing. Fails if any of the three levels moves by
/// more than `1e-6 Ω` between the two, and returns the fine-grid result.
pub fn schrodinger_splitting_oracle<T: Real>(well: &DoubleWell<T>, grid: FdGrid<T>) -> Result<OracleSpectrum<T>> {
    if !(grid.spacing > T::zero()) || !(grid.margin > T::zero()) {
        return Err(Error::Domain("grid spacing and margin must be positive".into()));
    }
    if grid.spacing > T::lit(0.1) {
        return Err(Error::Resolution(format!(
            "spacing {} oscillator lengths; at least 10 points per length required",
            grid.spacing
        )));
    }
    let ell = well.length_scale();
    let half_width = well.l() / T::lit(2.0) + grid.margin * ell;
    let n = (T::lit(2.0) * half_width / (grid.spacing * ell)).ceil().to_usize().unwrap_or(0).max(9) | 1;
    let coarse = doublet(well, half_width, n);
    let fine = doublet(well, half_width, 2 * n + 1);
    let levels = |d: &Doublet<T>| [d.e_g, d.e_g + d.splitting, d.e_2];
    let drift = levels(&coarse)
        .iter()
        .zip(levels(&fine).iter())
        .map(|(a, b)| (*a - *b).abs() / well.omega())
        .fold(T::zero(), T::max);
    if drift > T::tol(1e-6) {
        return Err(Error::Resolution(format!(
            "levels drift by {drift} Omega under grid halving (spacing {} lengths)",
            grid.spacing
        )));
    }
    let Doublet { e_g, splitting, e_2, mut phi_g, mut phi_e, x, h } = fine;
    let half = well.l() / T::lit(2.0);
    let centre = x
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (*a.1 - half).abs();
            let db = (*b.1 - half).abs();
            da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    for v in [&mut phi_g, &mut phi_e] {
        let norm = (v.iter().map(|&a| a * a).sum::<T>() * h).sqrt();
        let sign = if v[centre] < T::zero() { -T::one() } else { T::one() };
        for vi in v.iter_mut() {
            *vi *= sign / norm;
        }
    }
    let parity = |v: &[T]| -> T {
        let nn = v.len();
        (0..nn).map(|i| v[i] * v[nn - 1 - i]).sum::<T>() * h
    };
    Ok(OracleSpectrum {
        e_g,
        e_e: e_g + splitting,
        e_2,
        splitting,
        validity_ratio: splitting / (e_2 - e_g),
        drift,
        parity_g: parity(&phi_g),
        parity_e: parity(&phi_e),
        phi_g,
        phi_e,
        x,
        spacing: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn coarse_grid_rejected() {
        let w = DoubleWell::quartic(1.0f64, 1.0, 8.0).unwrap();
        let g = FdGrid { margin: 8.0, spacing: 0.2 };
        assert!(matches!(schrodinger_splitting_oracle(&w, g), Err(Error::Resolution(_))));
        let g = FdGrid { margin: 8.0, spacing: 0.05 };
        assert!(matches!(schrodinger_splitting_oracle(&w, g), Err(Error::Resolution(_))));
    }

    #[test]
    fn doublet_parities() {
        let w = DoubleWell::quartic(1.0f64, 1.0, 8.0).unwrap();
        let s = schrodinger_splitting_oracle(&w, FdGrid::default()).unwrap();
        assert!(s.parity_g > 0.999_999);
        assert!(s.parity_e < -0.999_999);
        assert!(s.splitting > 0.0 && s.validity_ratio < 1e-2);
    }

    #[test]
    fn harmonic_oscillator_levels() {
        let lv = fd_levels(|x: f64| 0.5 * x * x, 1.0, 10.0, 20_000, 3);
        for (k, e) in lv.values.iter().enumerate() {
            let exact = k as f64 + 0.5;
            assert!((e / exact - 1.0).abs() < 1e-6, "level {k}: {e}");
        }
    }

    #[test]
    fn harmonic_levels_in_a_wide_well() {
        // A double well whose minima are so far apart that each side is an
        // isolated oscillator: E_g ≈ E_e ≈ 1/2 and E_2 ≈ 3/2.
        let l = 16.0;
        let u: super::super::PotentialFn<f64> = Arc::new(move |x: f64| {
            let d = x.abs() - l / 2.0;
            0.5 * d * d
        });
        let w = DoubleWell::new(u, 1.0, l, 1.0).unwrap();
        let s = schrodinger_splitting_oracle(&w, FdGrid { margin: 8.0, spacing: 1.0 / 400.0 }).unwrap();
        assert!((s.e_g - 0.5).abs() < 1e-6);
        assert!((s.e_2 - 1.5).abs() < 2e-6);
    }
}
