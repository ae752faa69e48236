//! Modified Bessel function of the second kind, order zero.

use crate::scalar::Real;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `K0(x)` for `x > 0`; `+inf` at 0 and `NaN` for negative or NaN input.
pub fn bessel_k0<T: Real>(x: T) -> T {
    if x.is_nan() || x < T::zero() {
        return T::nan();
    }
    if x == T::zero() {
        return T::infinity();
    }
    if x <= T::lit(2.0) {
        k0_series(x)
    } else {
        bessel_k0_scaled(x) * (-x).exp()
    }
}

/// `exp(x)·K0(x)`, finite for large `x` where `K0` itself underflows.
pub fn bessel_k0_scaled<T: Real>(x: T) -> T {
    if x.is_nan() || x < T::zero() {
        return T::nan();
    }
    if x == T::zero() {
        return T::infinity();
    }
    if x <= T::lit(2.0) {
        k0_series(x) * x.exp()
    } else {
        k0_scaled_cf(x)
    }
}

/// Ascending series `-(ln(x/2)+γ) I0(x) + Σ (x²/4)^k H_k / (k!)²`.
fn k0_series<T: Real>(x: T) -> T {
    let y = x * x / T::lit(4.0);
    let mut term = T::one();
    let mut i0 = T::one();
    let mut acc = T::zero();
    let mut harmonic = T::zero();
    for k in 1..60 {
        let kf = T::from_usize_(k);
        term *= y / (kf * kf);
        harmonic += T::one() / kf;
        i0 += term;
        acc += term * harmonic;
        if term < T::epsilon() * T::lit(1e-3) * i0 {
            break;
        }
    }
    -((x / T::lit(2.0)).ln() + T::lit(EULER_GAMMA)) * i0 + acc
}

/// Steed's continued fraction for the ratio `K1/K0` specialised to order 0,
/// giving `exp(x)·K0(x) = sqrt(π/2x) / s`.
fn k0_scaled_cf<T: Real>(x: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let mut b = two * (one + x);
    let mut d = one / b;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = one;
    let a1 = T::lit(0.25);
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 2..10_000 {
        let fi = T::from_usize_(i);
        a -= two * (fi - one);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += two;
        d = one / (b + a * d);
        delh = (b * d - one) * delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < T::epsilon() * T::lit(0.1) {
            break;
        }
    }
    (T::PI() / (two * x)).sqrt() / s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_points() {
        assert!((bessel_k0(1.0f64) / 0.421_024_438_240_708_34 - 1.0).abs() < 1e-14);
        assert!((bessel_k0(2.0f64) / 0.113_893_872_749_533_44 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn branches_agree_at_switch() {
        let below = k0_series(2.0f64) * 2f64.exp();
        let above = k0_scaled_cf(2.0f64);
        assert!((below / above - 1.0).abs() < 1e-14);
    }

    #[test]
    fn large_argument_asymptotics() {
        let x = 400.0f64;
        let leading = (std::f64::consts::PI / (2.0 * x)).sqrt() * (1.0 - 1.0 / (8.0 * x));
        assert!((bessel_k0_scaled(x) / leading - 1.0).abs() < 1e-5);
    }

    #[test]
    fn edge_inputs() {
        assert!(bessel_k0(0.0f64).is_infinite());
        assert!(bessel_k0(-1.0f64).is_nan());
        assert!((bessel_k0(1.0f32) - 0.421_024_43).abs() < 1e-6);
    }
}
