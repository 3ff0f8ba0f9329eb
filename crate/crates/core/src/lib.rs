//! Numerical toolkit for Epstein zeta functions, toral periods over unit
//! lattices, class-group L-functions and the explicit non-vanishing bounds
//! that connect them.
//!
//! The pipeline, bottom-up:
//!
//! * [`special`]: Gamma, incomplete Gamma, erfc and the approximate
//!   functional equation kernel `f(s, a)`.
//! * [`lattice`]: bases, duals, LLL reduction, exhaustive short-vector
//!   enumeration, `λ₁` and successive minima.
//! * [`epstein`]: `E(g, s)` and the completed `E*(g, s)` anywhere off the
//!   poles, plus the cusp lower bounds.
//! * [`number_field`]: arithmetic data of a number field (built-in quadratic
//!   fields, JSON ingestion for everything else).
//! * [`periods`]: toral periods `Z(Λ)`, partial zeta values, class-group
//!   L-values by character DFT.
//! * [`bounds`]: the explicit constants `A₀`, `B₀`, `A₁` and the
//!   non-vanishing report.
//! * [`cli`]: the `toral` command line; [`acceptance`] holds the end-to-end
//!   checks run by `toral selftest` and the acceptance test target.

pub mod acceptance;
pub mod bounds;
pub mod cli;
pub mod epstein;
mod error;
pub mod lattice;
pub mod number_field;
pub mod oracle;
pub mod periods;
pub mod quadrature;
pub mod special;
pub mod summation;

pub use error::{Error, Result};
