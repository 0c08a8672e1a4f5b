//! Decide stochastic-order relations between exponential-family
//! distributions, their finite mixtures, and convolutions of gamma or
//! negative-binomial variables.
//!
//! Two independent routes are provided for every relation:
//!
//! - [`criteria`] evaluates closed-form decision rules (boundary behaviour of
//!   the log density ratio under relative log-concavity).
//! - [`oracle`] checks the defining inequalities directly on a grid.
//!
//! [`dist`] holds the distribution kernels both routes consume and
//! [`specfn`] the special functions underneath. [`expr`] parses the textual
//! distribution syntax shared by the CLI and the Python bindings, and
//! [`compare`] assembles the per-order comparison report.

pub mod compare;
pub mod criteria;
pub mod dist;
mod error;
pub mod expr;
pub mod oracle;
pub mod specfn;

pub use error::{Error, Result};
