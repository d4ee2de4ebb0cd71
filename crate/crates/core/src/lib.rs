//! ECH capacities of four-dimensional toric domains and the numerics behind
//! the sharp embedding verdicts for the lagrangian bidisk.
//!
//! - [`geometry`]: moment-plane regions and the Ω₀ curve
//! - [`weights`]: weight expansions of concave regions
//! - [`capacities`], [`domain`]: capacity sequences and domain descriptions
//! - [`embedding`]: obstructions, closed-form verdicts, the explicit map
//! - [`billiard`]: smoothed billiard action profile and its ODE oracle
//! - [`packing`]: triangle packing certificates
//! - [`scenario`], [`plot`], [`format`]: reporting

// `!(x > 0.0)` style guards are how NaN gets rejected; quadrature tables keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod billiard;
pub mod capacities;
pub mod domain;
pub mod embedding;
pub mod error;
pub mod format;
pub mod geometry;
pub mod packing;
pub mod plot;
pub mod scenario;
pub mod weights;

pub use error::{Error, Result};
