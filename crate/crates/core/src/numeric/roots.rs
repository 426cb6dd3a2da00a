//! Bracketed root finding.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_ITER: usize = 400;

/// Finds a root of `f` in `[lo, hi]` by bisection, to absolute width `tol`.
///
/// The endpoints must bracket a sign change (a zero at an endpoint counts).
pub fn bisect<T, F>(mut f: F, lo: T, hi: T, tol: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if !(f_lo.signum() != f_hi.signum()) {
        return Err(Error::Bracket {
            func: "bisect",
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo: f_lo.as_f64(),
            f_hi: f_hi.as_f64(),
        });
    }
    for _ in 0..MAX_ITER {
        let mid = lo + (hi - lo) * T::c(0.5);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence {
        func: "bisect",
        iterations: MAX_ITER,
    })
}

/// Newton's method kept inside a bracket, falling back to bisection when a
/// step leaves it. `fdf` returns `(f(x), f'(x))`. Stops when a step is
/// below `tol` in absolute terms or the bracket has collapsed.
pub fn newton_bracketed<T, F>(mut fdf: F, lo: T, hi: T, x0: T, tol: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> (T, T),
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let (f_lo, _) = fdf(lo);
    let (f_hi, _) = fdf(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Bracket {
            func: "newton_bracketed",
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo: f_lo.as_f64(),
            f_hi: f_hi.as_f64(),
        });
    }
    let rising = f_lo < T::zero();
    let mut x = if x0 > lo && x0 < hi { x0 } else { lo + (hi - lo) * T::c(0.5) };
    for _ in 0..MAX_ITER {
        let (fx, dfx) = fdf(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if (fx < T::zero()) == rising {
            lo = x;
        } else {
            hi = x;
        }
        let step = fx / dfx;
        let mut next = x - step;
        if !(next > lo && next < hi) || !step.is_finite() {
            next = lo + (hi - lo) * T::c(0.5);
        }
        if (next - x).abs() <= tol || hi - lo <= tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Convergence {
        func: "newton_bracketed",
        iterations: MAX_ITER,
    })
}

/// Grows `hi` geometrically from `lo` until `f` changes sign, returning the
/// bracket. `limit` caps the search.
pub fn expand_upper<T, F>(mut f: F, lo: T, first: T, limit: T) -> Result<(T, T)>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let f_lo = f(lo);
    let mut prev = lo;
    let mut hi = first;
    let mut f_hi = f(hi);
    while f_hi.signum() == f_lo.signum() && f_hi != T::zero() {
        if hi >= limit {
            return Err(Error::Bracket {
                func: "expand_upper",
                lo: lo.as_f64(),
                hi: hi.as_f64(),
                f_lo: f_lo.as_f64(),
                f_hi: f_hi.as_f64(),
            });
        }
        prev = hi;
        hi = (lo + (hi - lo) * T::c(2.0)).min(limit);
        f_hi = f(hi);
    }
    Ok((prev, hi))
}
