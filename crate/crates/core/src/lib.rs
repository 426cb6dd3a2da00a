//! Testing two simple hypotheses in the plane of their p-values.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Coefficients and reference values are kept as published, digits and all.
#![allow(clippy::excessive_precision)]

mod error;
mod scalar;

pub mod contours;
pub mod evidence;
pub mod families;
pub mod jlparadox;
pub mod limits;
pub mod numeric;
pub mod sequential;
pub mod specfun;

pub use contours::{ContourSpec, ExclusionRule, Region};
pub use error::{Error, Result};
pub use families::{HypothesisFamily, Hypothesis, Observation, PPoint, SimpleTest};
pub use scalar::Scalar;

/// Working precision of the statistical layers.
pub type Real = f64;
