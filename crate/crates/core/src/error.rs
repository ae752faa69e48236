use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("state is not normalized (norm^2 = {norm_sq})")]
    Unnormalized { norm_sq: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("no convergence after {iterations} iterations: {detail}")]
    NoConvergence { iterations: usize, detail: String },

    #[error("insufficient grid resolution: {0}")]
    Resolution(String),

    #[error("mode matching failed: {0}")]
    Matching(String),

    #[error("dimension {dim} exceeds the dense limit (N <= 64); use the rotor module for large N")]
    DimensionTooLarge { dim: usize },

    #[error("unstable parameters: {0}")]
    Unstable(String),

    #[error("relative energy drift {drift:e} exceeds {limit:e}")]
    EnergyDrift { drift: f64, limit: f64 },

    #[error("coordinate singularity: |xi| reached 1 at t = {t}")]
    Singularity { t: f64 },

    #[error("parity violation {0:e}")]
    Parity(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
