//! Workbench for linear superiorization on linear programs with a prescribed
//! condition number.
//!
//! The crate covers the full pipeline:
//!
//! * [`densela`]: dense kernels, Haar-like random semi-orthogonal factors and
//!   an extreme-singular-value estimator.
//! * [`probgen`]: instance synthesis `A = U diag(sigma) V` with an exact
//!   `sigma_max / sigma_min`, plus the binary instance format and MPS export.
//! * [`feasibility`]: the cyclic Agmon-Motzkin-Schoenberg projection operator.
//! * [`linsup`]: the superiorized AMS driver with restarted step sizes.
//! * [`oracle`]: a bounded-variable primal simplex and a vertex enumerator
//!   used as ground truth on small instances.
//! * [`harness`]: experiment grids, benchmark CSVs, trace files and SVG plots.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`, which is what the file
//! formats and the command-line tool use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod densela;
pub mod error;
pub mod feasibility;
pub mod harness;
pub mod linsup;
pub mod oracle;
pub mod probgen;
mod csvio;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision dense matrix.
pub type Matrix = densela::DenseMatrix<f64>;
/// Double-precision vector.
pub type Vector = densela::Vector<f64>;
/// Double-precision LP instance; the only precision with a file format.
pub type LpInstance = probgen::LpInstance<f64>;
/// Double-precision designed spectrum.
pub type SpectrumSpec = probgen::SpectrumSpec<f64>;
/// Double-precision half-space system.
pub type HalfspaceSystem<'a> = feasibility::HalfspaceSystem<'a, f64>;
/// Double-precision superiorization parameters.
pub type SuperiorizationParams = linsup::SuperiorizationParams<f64>;
/// Double-precision iterate trace.
pub type IterateTrace = linsup::IterateTrace<f64>;
/// Double-precision oracle result.
pub type OracleResult = oracle::OracleResult<f64>;

/// Single-precision dense matrix.
pub type Matrix32 = densela::DenseMatrix<f32>;
/// Single-precision vector.
pub type Vector32 = densela::Vector<f32>;
