//! Polar decomposition of rectangular matrices, homogeneous sampling on
//! Stiefel manifolds, and the Blaschke–Petkantschin change of variables,
//! together with a deterministic Monte Carlo harness that checks the
//! associated integration identities numerically.
//!
//! Modules:
//!
//! * [`matcore`]: dense matrices, Jacobi eigensolver, `X = O·P`.
//! * [`measures`]: log-gamma, `D_{n,k}`, `C_{n,k}`, Jacobian and Gaussian
//!   densities of the positive factor, Gaussian determinant moments.
//! * [`sampling`]: reproducible streams and random-matrix samplers.
//! * [`montecarlo`]: mergeable estimators, chunked parallel execution and the
//!   verification experiments.

// negated float comparisons are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod matcore;
pub mod measures;
pub mod montecarlo;
pub mod sampling;

pub use error::{Error, Result};
