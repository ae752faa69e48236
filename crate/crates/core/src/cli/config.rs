//! Scenario configuration: a TOML file with a `scenario` name, a
//! `[parameters]` table and an optional `[output]` table.
//!
//! ```toml
//! scenario = "rotor-simulate"
//!
//! [parameters]
//! b = 0.5
//! c = 0.2
//! t_end = 200.0
//!
//! [output]
//! path = "out"
//! format = "csv"
//! ```
//!
//! Every parameter has a default. Unknown keys anywhere are rejected, and
//! all of them are reported together.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    QubitEvolve,
    QubitGround,
    SemiclassicalOverlaps,
    WkbVsOracle,
    GgpSolve,
    TwomodeEvolve,
    RotorSimulate,
    RotorSpectrum,
    RotorLyapunov,
    AqtCompare,
    Sweep,
}

impl Scenario {
    pub const ALL: [Scenario; 11] = [
        Self::QubitEvolve,
        Self::QubitGround,
        Self::SemiclassicalOverlaps,
        Self::WkbVsOracle,
        Self::GgpSolve,
        Self::TwomodeEvolve,
        Self::RotorSimulate,
        Self::RotorSpectrum,
        Self::RotorLyapunov,
        Self::AqtCompare,
        Self::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::QubitEvolve => "qubit-evolve",
            Self::QubitGround => "qubit-ground",
            Self::SemiclassicalOverlaps => "semiclassical-overlaps",
            Self::WkbVsOracle => "wkb-vs-oracle",
            Self::GgpSolve => "ggp-solve",
            Self::TwomodeEvolve => "twomode-evolve",
            Self::RotorSimulate => "rotor-simulate",
            Self::RotorSpectrum => "rotor-spectrum",
            Self::RotorLyapunov => "rotor-lyapunov",
            Self::AqtCompare => "aqt-compare",
            Self::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputSpec {
    /// Output directory.
    pub path: Option<String>,
    pub format: Option<Format>,
}

/// Basis label of a two-qubit product state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitLabel {
    Ee,
    Gg,
    Eg,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QubitEvolveParams {
    /// Level splitting (rad/s).
    pub omega: f64,
    /// Rabi coupling (rad/s).
    pub uu: f64,
    pub initial: QubitLabel,
    pub t_end: f64,
    pub samples: usize,
}

impl Default for QubitEvolveParams {
    fn default() -> Self {
        Self { omega: 1.0, uu: 0.1, initial: QubitLabel::Eg, t_end: 100.0, samples: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QubitGroundParams {
    pub omega: f64,
    pub uu_values: Vec<f64>,
}

impl Default for QubitGroundParams {
    fn default() -> Self {
        Self { omega: 1.0, uu_values: vec![1e-3, 1e-2, 1e-1, 1.0, 10.0] }
    }
}

/// Quartic double well in natural units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WellParams {
    pub m: f64,
    pub big_omega: f64,
    pub l: f64,
}

impl Default for WellParams {
    fn default() -> Self {
        Self { m: 1.0, big_omega: 1.0, l: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OverlapParams {
    pub m: f64,
    pub big_omega: f64,
    pub l: f64,
    pub d_values: Vec<f64>,
}

impl Default for OverlapParams {
    fn default() -> Self {
        Self { m: 1.0, big_omega: 1.0, l: 10.0, d_values: vec![1.0, 2.0, 4.0, 7.0, 10.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WkbParams {
    pub m: f64,
    pub big_omega: f64,
    pub l_values: Vec<f64>,
}

impl Default for WkbParams {
    fn default() -> Self {
        Self { m: 1.0, big_omega: 1.0, l_values: vec![8.0, 9.0, 10.0, 11.0, 12.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GgpParams {
    pub m: f64,
    pub big_omega: f64,
    pub l: f64,
    pub g: f64,
    pub alpha: f64,
    pub n_particles: f64,
    pub eps: f64,
    /// Axis distance for the cross-axis coefficients.
    pub d: f64,
    pub grid_points: usize,
    /// Box half-width beyond `L/2`, in oscillator lengths.
    pub margin: f64,
}

impl Default for GgpParams {
    fn default() -> Self {
        Self {
            m: 1.0,
            big_omega: 1.0,
            l: 8.0,
            g: 0.01,
            alpha: 0.01,
            n_particles: 11.0,
            eps: 0.5,
            d: 2.0,
            grid_points: 256,
            margin: 6.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TwomodeParams {
    pub n: usize,
    pub omega_bar: f64,
    pub kappa: f64,
    pub uu: f64,
    /// Coherent-state angles of each condensate.
    pub xi1: f64,
    pub phi1: f64,
    pub xi2: f64,
    pub phi2: f64,
    pub t_end: f64,
    pub samples: usize,
}

impl Default for TwomodeParams {
    fn default() -> Self {
        Self {
            n: 8,
            omega_bar: 1.0,
            kappa: 0.05,
            uu: 0.02,
            xi1: 0.0,
            phi1: 0.0,
            xi2: 0.5,
            phi2: 0.0,
            t_end: 100.0,
            samples: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RotorSimParams {
    pub n: f64,
    pub omega_bar: f64,
    pub b: f64,
    pub c: f64,
    pub xi1: f64,
    pub phi1: f64,
    pub xi2: f64,
    pub phi2: f64,
    pub t_end: f64,
    /// Step in units of `1/ω̄`.
    pub step: f64,
    /// Keep every `stride`-th step.
    pub stride: usize,
}

impl Default for RotorSimParams {
    fn default() -> Self {
        Self {
            n: 1.0,
            omega_bar: 1.0,
            b: 0.5,
            c: 0.2,
            xi1: 0.0,
            phi1: 0.0,
            xi2: 0.5,
            phi2: 0.0,
            t_end: 200.0,
            step: 0.05,
            stride: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RotorSpectrumParams {
    pub n: f64,
    pub omega_bar: f64,
    pub b_values: Vec<f64>,
    pub c_values: Vec<f64>,
    pub amplitude: f64,
    /// Record length in beat periods.
    pub beats: f64,
    pub step: f64,
}

impl Default for RotorSpectrumParams {
    fn default() -> Self {
        Self {
            n: 1.0,
            omega_bar: 1.0,
            b_values: vec![0.0, 0.5],
            c_values: vec![0.05, 0.2],
            amplitude: 0.01,
            beats: 10.0,
            step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RotorLyapunovParams {
    pub n: f64,
    pub omega_bar: f64,
    pub b_values: Vec<f64>,
    pub c_values: Vec<f64>,
    pub xi1: f64,
    pub phi1: f64,
    pub xi2: f64,
    pub phi2: f64,
    pub t_end: f64,
    pub step: f64,
    pub interval: f64,
    pub seed: u64,
}

impl Default for RotorLyapunovParams {
    fn default() -> Self {
        Self {
            n: 1.0,
            omega_bar: 1.0,
            b_values: vec![0.0, 0.5, 1.0],
            c_values: vec![0.05, 0.2, 0.5],
            xi1: 0.0,
            phi1: 0.0,
            xi2: 0.5,
            phi2: 0.0,
            t_end: 500.0,
            step: 0.05,
            interval: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AqtParams {
    /// Particle mass (amu), radius (m), axis distance and separation (m).
    pub mass_amu: f64,
    pub radius: f64,
    pub d: f64,
    pub l: f64,
    /// Noise temperature in Planck units, energy difference in eV.
    pub theta: f64,
    pub delta_e_ev: f64,
    pub omega_over_uu: f64,
    pub periods: usize,
    /// Also derive NSE parameters for the quartic well below.
    pub nse: bool,
    pub well: WellParams,
    pub nse_alpha: f64,
    pub nse_d: f64,
    pub nse_eps: f64,
    pub nse_grid_points: usize,
}

impl Default for AqtParams {
    fn default() -> Self {
        Self {
            mass_amu: 1e10,
            radius: 100e-9,
            d: 1e-6,
            l: 1e-6,
            theta: 1.0,
            delta_e_ev: 1.0,
            omega_over_uu: 2.0,
            periods: 2,
            nse: true,
            well: WellParams { m: 1.0, big_omega: 1.0, l: 8.0 },
            nse_alpha: 0.01,
            nse_d: 2.0,
            nse_eps: 0.5,
            nse_grid_points: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepParams {
    pub masses_amu: Vec<f64>,
    pub d: f64,
    pub l: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        let masses = (0..10).map(|k| 10f64.powf(9.0 + k as f64 / 3.0)).collect();
        Self { masses_amu: masses, d: 1e-6, l: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Parameters {
    QubitEvolve(QubitEvolveParams),
    QubitGround(QubitGroundParams),
    SemiclassicalOverlaps(OverlapParams),
    WkbVsOracle(WkbParams),
    GgpSolve(GgpParams),
    TwomodeEvolve(TwomodeParams),
    RotorSimulate(RotorSimParams),
    RotorSpectrum(RotorSpectrumParams),
    RotorLyapunov(RotorLyapunovParams),
    AqtCompare(AqtParams),
    Sweep(SweepParams),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub parameters: Parameters,
    pub output: OutputSpec,
}

impl ScenarioConfig {
    /// Default parameters for `scenario`.
    pub fn defaults(scenario: Scenario) -> Self {
        let parameters = match scenario {
            Scenario::QubitEvolve => Parameters::QubitEvolve(Default::default()),
            Scenario::QubitGround => Parameters::QubitGround(Default::default()),
            Scenario::SemiclassicalOverlaps => Parameters::SemiclassicalOverlaps(Default::default()),
            Scenario::WkbVsOracle => Parameters::WkbVsOracle(Default::default()),
            Scenario::GgpSolve => Parameters::GgpSolve(Default::default()),
            Scenario::TwomodeEvolve => Parameters::TwomodeEvolve(Default::default()),
            Scenario::RotorSimulate => Parameters::RotorSimulate(Default::default()),
            Scenario::RotorSpectrum => Parameters::RotorSpectrum(Default::default()),
            Scenario::RotorLyapunov => Parameters::RotorLyapunov(Default::default()),
            Scenario::AqtCompare => Parameters::AqtCompare(Default::default()),
            Scenario::Sweep => Parameters::Sweep(Default::default()),
        };
        Self { scenario, parameters, output: OutputSpec::default() }
    }
}

/// A key that no scenario field accepts, with its line when found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnknownKey {
    pub path: String,
    pub line: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Syntax(String),
    Invalid(String),
    UnknownKeys(Vec<UnknownKey>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax(m) => write!(f, "config syntax error: {m}"),
            Self::Invalid(m) => write!(f, "invalid config: {m}"),
            Self::UnknownKeys(keys) => {
                write!(f, "unknown config keys:")?;
                for k in keys {
                    match k.line {
                        Some(l) => write!(f, " {} (line {l})", k.path)?,
                        None => write!(f, " {}", k.path)?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Deserialize)]
struct Top {
    scenario: Scenario,
    #[serde(default)]
    parameters: Option<toml::Table>,
    #[serde(default)]
    output: OutputSpec,
}

fn strict<T: DeserializeOwned>(value: toml::Value, prefix: &str, unknown: &mut Vec<String>) -> Result<T, ConfigError> {
    serde_ignored::deserialize(value, |path| {
        let p = path.to_string();
        unknown.push(if prefix.is_empty() { p } else { format!("{prefix}.{p}") });
    })
    .map_err(|e| ConfigError::Invalid(if prefix.is_empty() { e.to_string() } else { format!("{prefix}: {e}") }))
}

/// Line (1-based) on which dotted `path` is assigned, by scanning table
/// headers and `key =` lines.
fn locate(text: &str, path: &str) -> Option<usize> {
    let (table, key) = match path.rsplit_once('.') {
        Some((t, k)) => (t, k),
        None => ("", path),
    };
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('[') && t.ends_with(']') {
            current = t.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            continue;
        }
        if let Some(rest) = t.strip_prefix(key) {
            let assigned = rest.trim_start().starts_with('=');
            let inline = format!("{}.{key}", current);
            if assigned && (current == table || inline.trim_start_matches('.') == path) {
                return Some(i + 1);
            }
        }
    }
    None
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let mut unknown = Vec::new();
    let top: Top = strict(toml::Value::Table(table), "", &mut unknown)?;
    let params = toml::Value::Table(top.parameters.unwrap_or_default());
    let u = &mut unknown;
    let p = "parameters";
    let parameters = match top.scenario {
        Scenario::QubitEvolve => Parameters::QubitEvolve(strict(params, p, u)?),
        Scenario::QubitGround => Parameters::QubitGround(strict(params, p, u)?),
        Scenario::SemiclassicalOverlaps => Parameters::SemiclassicalOverlaps(strict(params, p, u)?),
        Scenario::WkbVsOracle => Parameters::WkbVsOracle(strict(params, p, u)?),
        Scenario::GgpSolve => Parameters::GgpSolve(strict(params, p, u)?),
        Scenario::TwomodeEvolve => Parameters::TwomodeEvolve(strict(params, p, u)?),
        Scenario::RotorSimulate => Parameters::RotorSimulate(strict(params, p, u)?),
        Scenario::RotorSpectrum => Parameters::RotorSpectrum(strict(params, p, u)?),
        Scenario::RotorLyapunov => Parameters::RotorLyapunov(strict(params, p, u)?),
        Scenario::AqtCompare => Parameters::AqtCompare(strict(params, p, u)?),
        Scenario::Sweep => Parameters::Sweep(strict(params, p, u)?),
    };
    if !unknown.is_empty() {
        let mut keys: Vec<UnknownKey> =
            unknown.into_iter().map(|path| UnknownKey { line: locate(text, &path), path }).collect();
        keys.sort_by(|a, b| (a.line, &a.path).cmp(&(b.line, &b.path)));
        return Err(ConfigError::UnknownKeys(keys));
    }
    Ok(ScenarioConfig { scenario: top.scenario, parameters, output: top.output })
}
