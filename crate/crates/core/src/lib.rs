//! Gravitationally interacting cat states.
//!
//! Two massive particles (or condensates), each delocalised across a
//! symmetric double well, interact only through Newtonian gravity. The crate
//! models the problem at several levels: an exact two-qubit model, the
//! semiclassical double-well reduction that fixes its parameters, a
//! gravitational Gross-Pitaevskii solver, the two-mode collective-spin model
//! of a pair of condensates, its classical coupled-rotor limit, and
//! decoherence comparators from alternative quantum theories.
//!
//! Numerical kernels are generic over [`Real`] (`f32`/`f64`); `params` and
//! the CLI are SI-facing and `f64` only. Internally `ħ = 1`.

// `!(x > 0)` is used on purpose so NaN fails validation; dense kernels index
// several arrays with one loop variable.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod aqt;
pub mod cli;
pub mod error;
pub mod ggp;
pub mod linalg;
pub mod overlap;
pub mod params;
pub mod quadrature;
pub mod qubitpair;
pub mod rotor;
pub mod scalar;
pub mod semiclassical;
pub mod special;
pub mod twomode;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub type QubitPair = qubitpair::QubitPairModel<f64>;
pub type QubitPair32 = qubitpair::QubitPairModel<f32>;
pub type TwoQubitState = qubitpair::TwoQubitState<f64>;
pub type TwoQubitDensity = qubitpair::TwoQubitDensity<f64>;
