//! Scalar abstraction for the numerical kernel.
//!
//! The special functions, quadrature and root finders are written once
//! against [`Scalar`] and instantiated for `f32` and `f64`. The statistical
//! layers above them work in [`crate::Real`], because their accuracy targets
//! (tails down to 1e-300, relative errors near 1e-12) only make sense in
//! double precision.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type usable by the numerical kernel.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`, rounding as needed.
    #[inline]
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal is representable")
    }

    /// Lossy conversion for diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
