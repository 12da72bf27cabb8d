//! Space-time Galerkin time stepping for time-fractional diffusion.
//!
//! The discrete solution is piecewise constant in time and continuous
//! piecewise linear in space on a uniform mesh of `(0, 1)`. The scheme is
//! causal: the Galerkin matrix of the Riemann-Liouville derivative against
//! piecewise constants is lower triangular, so the space-time system is
//! solved by marching over the time intervals with one tridiagonal solve
//! per step plus a fractional history term.
//!
//! Modules:
//! - [`fracops`]: closed-form fractional integrals/derivatives of powers and
//!   piecewise constants, the causal weight matrix, fractional pairings and
//!   a singular-kernel quadrature oracle.
//! - [`fem1d`]: P1 mass/stiffness matrices, load vectors and norms.
//! - [`assembly`]: problem definitions and space-time load arrays.
//! - [`solver`]: the time-marching solver and its scalar analogue.
//! - [`harness`]: refinement sweeps, reference caching and order tables.
//! - [`verify`]: the executable property suite behind `fracstep verify`.

// comparisons like `!(x > 0.0)` are written that way so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod assembly;
pub mod error;
pub mod fem1d;
pub mod fracops;
pub mod harness;
pub mod solver;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
