//! Physical constants, SI/natural unit conversion and the elementary
//! gravitational couplings.
//!
//! Everything here is `f64`: SI magnitudes such as `G m² ≈ 1e-42 J·m` are far
//! outside the `f32` range once squared. Internally the rest of the crate
//! works in natural units with `ħ = 1`.

use crate::error::{domain, Result};

/// CODATA 2018 values, defined once for the whole crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Newton's constant, m³ kg⁻¹ s⁻².
    pub g: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Atomic mass unit, kg.
    pub amu: f64,
    /// Boltzmann constant, J/K. Thermal arguments are written `ħω / 2 k_B T`.
    pub k_b: f64,
    /// Speed of light, m/s (Planck units only).
    pub c: f64,
    /// Elementary charge, C (eV conversions only).
    pub e: f64,
}

pub const CODATA: PhysicalConstants = PhysicalConstants {
    g: 6.674_30e-11,
    hbar: 1.054_571_817e-34,
    amu: 1.660_539_066_60e-27,
    k_b: 1.380_649e-23,
    c: 299_792_458.0,
    e: 1.602_176_634e-19,
};

impl PhysicalConstants {
    pub fn planck_time(&self) -> f64 {
        (self.hbar * self.g / self.c.powi(5)).sqrt()
    }

    pub fn planck_energy(&self) -> f64 {
        (self.hbar * self.c.powi(5) / self.g).sqrt()
    }

    pub fn planck_temperature(&self) -> f64 {
        self.planck_energy() / self.k_b
    }
}

/// SI description of one gravcat pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Particle mass, kg.
    pub m: f64,
    /// Distance between the two parallel axes, m.
    pub d: f64,
    /// Separation of the two well minima along each axis, m.
    pub l: f64,
    /// Small-oscillation trap frequency, rad/s.
    pub omega_trap: Option<f64>,
    /// Environment temperature, K.
    pub temperature: Option<f64>,
}

impl PhysicalParams {
    pub fn new(m: f64, d: f64, l: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(domain(format!("mass must be positive, got {m}")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(domain(format!("axis separation d must be positive, got {d}")));
        }
        if !(l >= 0.0 && l.is_finite()) {
            return Err(domain(format!("well separation L must be non-negative, got {l}")));
        }
        Ok(Self { m, d, l, omega_trap: None, temperature: None })
    }

    pub fn with_trap(mut self, omega: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(domain(format!("trap frequency must be positive, got {omega}")));
        }
        self.omega_trap = Some(omega);
        Ok(self)
    }

    pub fn with_temperature(mut self, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(domain(format!("temperature must be non-negative, got {t}")));
        }
        self.temperature = Some(t);
        Ok(self)
    }

    /// Diagonal distance `d' = sqrt(d² + L²)`.
    pub fn d_prime(&self) -> f64 {
        self.d.hypot(self.l)
    }

    pub fn alpha(&self) -> f64 {
        CODATA.g * self.m * self.m
    }

    pub fn rabi_frequency(&self) -> f64 {
        rabi_frequency(self.alpha(), self.d, self.l).expect("validated on construction")
    }

    /// Oscillator scales, available when a trap frequency is set.
    pub fn scales(&self) -> Option<Scales> {
        self.omega_trap.map(|w| Scales::oscillator(self.m, w))
    }

    /// `sqrt(mΩ/ħ)·L`, the semiclassical parameter.
    pub fn semiclassical_parameter(&self) -> Option<f64> {
        self.scales().map(|s| self.l / s.length)
    }
}

/// `α = G m²` in SI together with its rate form `α/ħ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    /// J·m.
    pub si: f64,
    /// `α/ħ` in m/s; divide by a length to get rad/s.
    pub per_hbar: f64,
}

pub fn gravitational_coupling(m: f64) -> Result<Coupling> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(domain(format!("mass must be positive, got {m}")));
    }
    let si = CODATA.g * m * m;
    Ok(Coupling { si, per_hbar: si / CODATA.hbar })
}

/// Rabi coupling `℧ = (α/2ħ)(1/d − 1/d')` in rad/s, `α` in J·m.
pub fn rabi_frequency(alpha: f64, d: f64, l: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(domain(format!("d must be positive, got {d}")));
    }
    if !(l >= 0.0) {
        return Err(domain(format!("L must be non-negative, got {l}")));
    }
    if !(alpha >= 0.0) {
        return Err(domain(format!("alpha must be non-negative, got {alpha}")));
    }
    let dp = d.hypot(l);
    // 1/d − 1/d' = L² / (d d' (d + d')) avoids cancellation for L ≪ d.
    let diff = l * l / (d * dp * (d + dp));
    Ok(alpha / (2.0 * CODATA.hbar) * diff)
}

/// Rabi period `2π/℧` in seconds for mass `m` (kg).
pub fn rabi_period(m: f64, d: f64, l: f64) -> Result<f64> {
    let uu = rabi_frequency(gravitational_coupling(m)?.si, d, l)?;
    if uu == 0.0 {
        return Err(domain("L = 0 gives no Rabi coupling"));
    }
    Ok(2.0 * std::f64::consts::PI / uu)
}

/// Mass (kg) whose Rabi period equals `period` seconds.
///
/// Found by bisection in log-mass rather than by inverting `℧ ∝ m²`, so the
/// result is an independent check of the forward formula.
pub fn mass_for_period(period: f64, d: f64, l: f64) -> Result<f64> {
    if !(period > 0.0) {
        return Err(domain(format!("period must be positive, got {period}")));
    }
    let f = |lnm: f64| rabi_period(lnm.exp(), d, l).map(|p| p.ln() - period.ln());
    let (mut lo, mut hi) = ((1e-40f64).ln(), (1e10f64).ln());
    if f(lo)? < 0.0 || f(hi)? > 0.0 {
        return Err(domain(format!("period {period} s not bracketed by masses 1e-40..1e10 kg")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Ohmic dissipation rate `Γ = η ω coth(ħω / 2 k_B T)` in 1/s.
///
/// `eta` is the dimensionless system-bath coupling.
pub fn ohmic_rate(eta: f64, omega: f64, temperature: f64) -> Result<f64> {
    if !(eta >= 0.0) {
        return Err(domain(format!("eta must be non-negative, got {eta}")));
    }
    if !(omega > 0.0) {
        return Err(domain(format!("omega must be positive, got {omega}")));
    }
    if !(temperature >= 0.0) {
        return Err(domain(format!("temperature must be non-negative, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(eta * omega);
    }
    let x = CODATA.hbar * omega / (2.0 * CODATA.k_b * temperature);
    let coth = if x < 1e-8 { 1.0 / x + x / 3.0 } else { 1.0 / x.tanh() };
    Ok(eta * omega * coth)
}

/// Reference scales for nondimensionalisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    /// m
    pub length: f64,
    /// s
    pub time: f64,
    /// J
    pub energy: f64,
    /// kg
    pub mass: f64,
}

impl Scales {
    /// Oscillator units: length `sqrt(ħ/mΩ)`, time `1/Ω`, energy `ħΩ`, mass `m`.
    pub fn oscillator(m: f64, omega: f64) -> Self {
        Self { length: (CODATA.hbar / (m * omega)).sqrt(), time: 1.0 / omega, energy: CODATA.hbar * omega, mass: m }
    }

    pub fn frequency(&self) -> f64 {
        1.0 / self.time
    }

    pub fn length(&self, si: f64) -> NaturalValue {
        NaturalValue::from_si(si, self.length)
    }

    pub fn energy(&self, si: f64) -> NaturalValue {
        NaturalValue::from_si(si, self.energy)
    }

    /// Rates and angular frequencies.
    pub fn rate(&self, si: f64) -> NaturalValue {
        NaturalValue::from_si(si, 1.0 / self.time)
    }

    /// Energy·length couplings such as `α`.
    pub fn coupling(&self, si: f64) -> NaturalValue {
        NaturalValue::from_si(si, self.energy * self.length)
    }
}

/// A dimensionless number and the SI scale it was measured in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalValue {
    pub value: f64,
    pub scale: f64,
}

impl NaturalValue {
    pub fn from_si(si: f64, scale: f64) -> Self {
        Self { value: si / scale, scale }
    }

    pub fn to_si(self) -> f64 {
        self.value * self.scale
    }
}
