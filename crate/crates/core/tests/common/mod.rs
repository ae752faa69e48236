//! Independent oracles shared by the integration tests. Nothing here calls
//! into the crate's own numerics.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;
use num_complex::Complex64;

pub fn dmatrix(a: &Array2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn eigenvalues(a: &Array2<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = dmatrix(a).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|x, y| x.total_cmp(y));
    v
}

/// `exp(−iHt)` by nalgebra's Padé scaling-and-squaring.
pub fn expm(h: &Array2<f64>, t: f64) -> DMatrix<Complex64> {
    let n = h.nrows();
    DMatrix::from_fn(n, n, |i, j| Complex64::new(0.0, -h[[i, j]] * t)).exp()
}

pub fn apply(u: &DMatrix<Complex64>, psi: &[Complex64]) -> Vec<Complex64> {
    (u * DVector::from_column_slice(psi)).iter().copied().collect()
}

/// Two-qubit amplitudes in the ordered basis `[ee, gg, eg, ge]` as a
/// `ψ[q1][q2]` tensor with `e = 0`, `g = 1`.
pub fn tensor(amps: &[Complex64]) -> [[Complex64; 2]; 2] {
    [[amps[0], amps[2]], [amps[3], amps[1]]]
}

/// `1 − Tr ρ1²` by explicit partial trace over the second qubit.
#[allow(clippy::needless_range_loop)]
pub fn purity_deficit(amps: &[Complex64]) -> f64 {
    let psi = tensor(amps);
    let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for k in 0..2 {
                rho[a][b] += psi[a][k] * psi[b][k].conj();
            }
        }
    }
    let mut tr = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            tr += (rho[a][b] * rho[b][a]).re;
        }
    }
    1.0 - tr
}

/// Classical RK4 on `y' = f(y)`; a low-order reference for the rotor
/// integrator.
pub fn rk4<const N: usize>(f: impl Fn(&[f64; N]) -> [f64; N], y0: [f64; N], h: f64, steps: usize) -> [f64; N] {
    let mut y = y0;
    let add = |y: &[f64; N], k: &[f64; N], s: f64| {
        let mut o = *y;
        for i in 0..N {
            o[i] += s * k[i];
        }
        o
    };
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&add(&y, &k1, h / 2.0));
        let k3 = f(&add(&y, &k2, h / 2.0));
        let k4 = f(&add(&y, &k3, h));
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// `K0(x)` from `∫_0^∞ exp(−x cosh t) dt` by the trapezoid rule, which is
/// spectrally accurate for this doubly-decaying integrand.
pub fn bessel_k0(x: f64) -> f64 {
    let h = 0.01;
    let mut sum = 0.5 * (-x).exp();
    let mut t: f64 = h;
    loop {
        let v = (-x * t.cosh()).exp();
        sum += v;
        if v < 1e-300 || t > 50.0 {
            break;
        }
        t += h;
    }
    sum * h
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
