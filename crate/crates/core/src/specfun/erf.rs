//! Error function, its complement, and their inverses.
//!
//! `erf` uses the everywhere-positive series
//! `erf(x) = 2/√π · x·e^{-x²} · Σ (2x²)^n / (2n+1)!!`, which has no
//! cancellation. The complement for `x ≥ 1.5` comes from the Legendre
//! continued fraction of `Γ(1/2, x²)`, evaluated in scaled form so that
//! `erfc` keeps full relative accuracy down to the underflow limit.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_TERMS: usize = 500;

/// `exp(-x²)` with the square split so the exponent is exact to first order.
pub(crate) fn exp_neg_sq<T: Scalar>(x: T) -> T {
    let ax = x.abs();
    let scale = T::c(256.0);
    let hi = (ax * scale).floor() / scale;
    let lo = ax - hi;
    (-(hi * hi)).exp() * (-(lo * (ax + hi))).exp()
}

fn erf_series<T: Scalar>(x: T) -> T {
    let two_x2 = T::c(2.0) * x * x;
    let mut term = T::one();
    let mut sum = T::one();
    for n in 1..MAX_TERMS {
        term = term * two_x2 / T::c((2 * n + 1) as f64);
        sum = sum + term;
        if term <= sum * T::epsilon() * T::c(0.5) {
            break;
        }
    }
    T::FRAC_2_SQRT_PI() * x * exp_neg_sq(x) * sum
}

/// Scaled complementary error function `e^{x²}·erfc(x)` for `x ≥ 1`.
fn erfcx_cf<T: Scalar>(x: T) -> T {
    // Modified Lentz on Q(1/2, y), y = x²: b_i = y + 2i + 1/2, a_i = i(i - 1/2).
    let y = x * x;
    let tiny = T::min_positive_value() / T::epsilon();
    let mut b = y + T::c(0.5);
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let fi = T::c(i as f64);
        let an = -fi * (fi - T::c(0.5));
        b = b + T::c(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let del = d * c;
        h = h * del;
        if (del - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    x * h / T::PI().sqrt()
}

/// Error function.
pub fn erf<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let v = if ax < T::c(2.5) {
        erf_series(ax)
    } else if ax > T::c(6.5) {
        T::one()
    } else {
        T::one() - erfc(ax)
    };
    if x < T::zero() {
        -v
    } else {
        v
    }
}

/// Complementary error function `1 - erf(x)`, accurate in the far tail.
pub fn erfc<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        return T::c(2.0) - erfc(-x);
    }
    if x < T::c(1.5) {
        return T::one() - erf_series(x);
    }
    if x > T::c(27.3) {
        return T::zero();
    }
    exp_neg_sq(x) * erfcx_cf(x)
}

/// Scaled complementary error function `e^{x²}·erfc(x)` for `x ≥ 0`.
pub fn erfcx<T: Scalar>(x: T) -> T {
    if x < T::c(1.5) {
        erfc(x) * (x * x).exp()
    } else {
        erfcx_cf(x)
    }
}

/// Cheap closed-form start for the inverse (about 3 significant digits).
fn erf_inv_guess<T: Scalar>(y: T) -> T {
    let a = T::c(0.147);
    let ln = (T::one() - y * y).ln();
    let first = T::c(2.0) / (T::PI() * a) + ln / T::c(2.0);
    let inner = (first * first - ln / a).sqrt() - first;
    let v = inner.max(T::zero()).sqrt();
    if y < T::zero() {
        -v
    } else {
        v
    }
}

/// Inverse error function on `(-1, 1)`.
pub fn erf_inv<T: Scalar>(y: T) -> Result<T> {
    if !(y.abs() < T::one()) {
        return Err(Error::domain("erf_inv", format!("|y| < 1 required, got {y}")));
    }
    if y.abs() > T::c(0.5) {
        let v = erfc_inv_unit(T::one() - y.abs());
        return Ok(if y < T::zero() { -v } else { v });
    }
    if y.abs() < T::c(1e-8) {
        // erf(x) = 2x/√π (1 - x²/3 + ...)
        let x = y * T::PI().sqrt() / T::c(2.0);
        return Ok(x * (T::one() + x * x / T::c(3.0)));
    }
    let mut x = erf_inv_guess(y);
    for _ in 0..8 {
        let f = erf(x) - y;
        let fp = T::FRAC_2_SQRT_PI() * exp_neg_sq(x);
        // Halley: f'' = -2x f'
        let dx = f / (fp + x * f);
        x = x - dx;
        if dx.abs() <= T::epsilon() * x.abs() {
            break;
        }
    }
    Ok(x)
}

/// Inverse complementary error function on `(0, 2)`.
pub fn erfc_inv<T: Scalar>(q: T) -> Result<T> {
    if !(q > T::zero() && q < T::c(2.0)) {
        return Err(Error::domain("erfc_inv", format!("0 < q < 2 required, got {q}")));
    }
    if q > T::one() {
        return Ok(-erfc_inv_unit(T::c(2.0) - q));
    }
    Ok(erfc_inv_unit(q))
}

/// `erfc_inv` restricted to `q ∈ (0, 1]`, so the result is non-negative.
fn erfc_inv_unit<T: Scalar>(q: T) -> T {
    if q == T::one() {
        return T::zero();
    }
    if q >= T::c(0.0625) {
        let mut x = erf_inv_guess(T::one() - q);
        for _ in 0..8 {
            let f = erfc(x) - q;
            let fp = -T::FRAC_2_SQRT_PI() * exp_neg_sq(x);
            let dx = f / (fp + x * f);
            x = x - dx;
            if dx.abs() <= T::epsilon() * x.abs() {
                break;
            }
        }
        return x;
    }
    // Tail: Newton on ln erfc(x) = ln q, using erfc(x) ≈ e^{-x²}/(x√π) as a start.
    let ln_q = q.ln();
    let sqrt_pi = T::PI().sqrt();
    let mut x = (-ln_q).sqrt();
    for _ in 0..3 {
        x = (-(ln_q + (sqrt_pi * x).ln())).max(T::c(0.25)).sqrt();
    }
    for _ in 0..20 {
        let scaled = erfcx_cf(x);
        let g = -(x * x) + scaled.ln() - ln_q;
        let gp = -T::c(2.0) / (sqrt_pi * scaled);
        let dx = g / gp;
        x = x - dx;
        if dx.abs() <= T::c(2.0) * T::epsilon() * x {
            break;
        }
    }
    x
}
