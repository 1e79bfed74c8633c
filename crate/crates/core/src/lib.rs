//! Lieb-Thirring constants and spectral verification for polyharmonic
//! operators `(-Δ)^l + V`.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`], [`roots`], [`quadrature`], [`linalg`]: numerical building blocks.
//! * [`constants`]: closed-form and root-defined constant families.
//! * [`greens`]: resolvent kernel of `(-∂²)^l + κ` on the line.
//! * [`delta_solver`]: exact spectra for finite sums of point interactions.
//! * [`spectral`]: pseudospectral discretisation for grid-sampled potentials.
//! * [`majorization`]: Ky-Fan norms and the kernel-operator monotonicity checks.
//! * [`verify`]: end-to-end bound certification and identity suites.

// `!(x > 0.0)` is used deliberately so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod delta_solver;
pub mod error;
pub mod greens;
pub mod linalg;
pub mod majorization;
pub mod quadrature;
pub mod roots;
pub mod special;
pub mod spectral;
pub mod verify;

pub use constants::{LtParams, PolyharmonicConstants, Theorem};
pub use delta_solver::{DeltaPotential, Spectrum};
pub use error::{Error, Result};
pub use spectral::{BoundReport, GridConfig, PotentialField, Symbol};

/// Crate version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
