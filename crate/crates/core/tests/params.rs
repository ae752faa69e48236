mod common;

use gravcat::params::{self, CODATA};
use proptest::prelude::*;

#[test]
fn heavy_particle_period_is_minutes_to_hours() {
    let m = 1e11 * CODATA.amu;
    let period = params::rabi_period(m, 1e-6, 1e-6).unwrap();
    assert!((1e2..=1e4).contains(&period), "period {period} s");

    let m60 = params::mass_for_period(60.0, 1e-6, 1e-6).unwrap() / CODATA.amu;
    assert!((1e11..=1e12).contains(&m60), "mass {m60} amu");
}

#[test]
fn rabi_frequency_by_hand() {
    // ℧ = G m² (1/d − 1/d') / 2ħ at d = L = 1 µm.
    let m = 1e11 * CODATA.amu;
    let d = 1e-6;
    let by_hand = CODATA.g * m * m * (1.0 / d - 1.0 / (2.0f64.sqrt() * d)) / (2.0 * CODATA.hbar);
    let uu = params::rabi_frequency(params::gravitational_coupling(m).unwrap().si, d, d).unwrap();
    assert!(common::rel(uu, by_hand) < 1e-14);
}

proptest! {
    #[test]
    fn mass_for_period_inverts_forward_map(lp in 0.0f64..8.0, ld in -7.0f64..-5.0, ll in -7.0f64..-5.0) {
        let (p, d, l) = (10f64.powf(lp), 10f64.powf(ld), 10f64.powf(ll));
        let m = params::mass_for_period(p, d, l).unwrap();
        let back = params::rabi_period(m, d, l).unwrap();
        prop_assert!(common::rel(back, p) < 1e-12);
    }

    #[test]
    fn period_scales_as_inverse_mass_squared(lm in -20.0f64..-14.0, f in 1.1f64..10.0) {
        let m = 10f64.powf(lm);
        let a = params::rabi_period(m, 1e-6, 5e-7).unwrap();
        let b = params::rabi_period(m * f, 1e-6, 5e-7).unwrap();
        prop_assert!(common::rel(a / b, f * f) < 1e-12);
    }
}
