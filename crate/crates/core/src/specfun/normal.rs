//! Standard normal density, distribution function and one-sided tails.

use super::erf::{erfc, erfc_inv, exp_neg_sq};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Standard normal density `φ(z)`.
pub fn normal_pdf<T: Scalar>(z: T) -> T {
    exp_neg_sq(z / T::SQRT_2()) / (T::c(2.0) * T::PI()).sqrt()
}

/// Standard normal distribution function `Φ(z)`.
pub fn normal_cdf<T: Scalar>(z: T) -> T {
    T::c(0.5) * erfc(-z / T::SQRT_2())
}

/// One-sided upper tail `P(Z ≥ z) = ½ erfc(z/√2)`.
pub fn z_to_p<T: Scalar>(z: T) -> T {
    T::c(0.5) * erfc(z / T::SQRT_2())
}

/// Inverse of [`z_to_p`]: the significance `z` whose upper tail is `p`.
pub fn p_to_z<T: Scalar>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::domain("p_to_z", format!("0 < p < 1 required, got {p}")));
    }
    Ok(T::SQRT_2() * erfc_inv(T::c(2.0) * p)?)
}
