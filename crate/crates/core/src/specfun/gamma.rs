//! Log-gamma and the regularized incomplete gamma functions.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// Stirling series coefficients for ln Γ(a) - [(a - 1/2) ln a - a + ln √(2π)].
const STIRLING: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
];

const STIRLING_MIN: f64 = 10.0;

fn stirling_correction<T: Scalar>(a: T) -> T {
    let inv = T::one() / a;
    let inv2 = inv * inv;
    let mut acc = T::zero();
    for &c in STIRLING.iter().rev() {
        acc = acc * inv2 + T::c(c);
    }
    acc * inv
}

/// `ln Γ(a)` for `a > 0`.
pub fn ln_gamma<T: Scalar>(a: T) -> T {
    if a < T::c(0.5) {
        // Γ(a) = Γ(a + 1) / a keeps the Lanczos sum in its accurate range.
        return ln_gamma(a + T::one()) - a.ln();
    }
    if a >= T::c(STIRLING_MIN) {
        let half_ln_2pi = T::c(0.918_938_533_204_672_8);
        return (a - T::c(0.5)) * a.ln() - a + half_ln_2pi + stirling_correction(a);
    }
    let z = a - T::one();
    let mut sum = T::c(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum = sum + T::c(c) / (z + T::c(i as f64));
    }
    let t = z + T::c(LANCZOS_G + 0.5);
    T::c(0.918_938_533_204_672_8) + (z + T::c(0.5)) * t.ln() - t + sum.ln()
}

/// `ln(1 + t) - t`, accurate for small `|t|`.
pub(crate) fn log1pmx<T: Scalar>(t: T) -> T {
    if t.abs() > T::c(0.5) {
        return t.ln_1p() - t;
    }
    // ln(1+t) = 2 atanh(u) with u = t / (2 + t); the leading 2u - t = -2u²/(1-u)
    // cancels analytically.
    let u = t / (T::c(2.0) + t);
    let u2 = u * u;
    let mut pow = u * u2;
    let mut acc = T::zero();
    let mut k = 3.0;
    loop {
        let term = pow / T::c(k);
        acc = acc + term;
        if term.abs() <= T::epsilon() * acc.abs() || k > 200.0 {
            break;
        }
        pow = pow * u2;
        k += 2.0;
    }
    -T::c(2.0) * u2 / (T::one() - u) + T::c(2.0) * acc
}

/// `ln(x^a e^{-x} / Γ(a))`, the common prefactor of the incomplete gamma
/// expansions, with the large-`a` cancellation removed.
pub(crate) fn ln_gamma_prefactor<T: Scalar>(a: T, x: T) -> T {
    if a >= T::c(STIRLING_MIN) {
        let t = (x - a) / a;
        let half_ln_2pi = T::c(0.918_938_533_204_672_8);
        // a·(ln(x/a) - (x - a)/a), without forming 1 + t when x is far from a
        let core = if t.abs() <= T::c(0.5) {
            a * log1pmx(t)
        } else {
            a * (x / a).ln() - (x - a)
        };
        core + T::c(0.5) * a.ln() - half_ln_2pi - stirling_correction(a)
    } else {
        a * x.ln() - x - ln_gamma(a)
    }
}

fn check_args<T: Scalar>(func: &'static str, a: T, x: T) -> Result<()> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::domain(func, format!("shape must be positive and finite, got {a}")));
    }
    if !(x >= T::zero()) {
        return Err(Error::domain(func, format!("argument must be non-negative, got {x}")));
    }
    Ok(())
}

fn series_p<T: Scalar>(a: T, x: T) -> Result<T> {
    let max_iter = 100_000 + (10.0 * a.as_f64().sqrt()) as usize;
    let mut ap = a;
    let mut term = T::one() / a;
    let mut sum = term;
    for _ in 0..max_iter {
        ap = ap + T::one();
        term = term * x / ap;
        sum = sum + term;
        if term.abs() < sum.abs() * T::epsilon() * T::c(0.5) {
            return Ok(sum * ln_gamma_prefactor(a, x).exp());
        }
    }
    Err(Error::Convergence {
        func: "reg_gamma series",
        iterations: max_iter,
    })
}

fn cf_q<T: Scalar>(a: T, x: T) -> Result<T> {
    let max_iter = 100_000 + (10.0 * a.as_f64().sqrt()) as usize;
    let tiny = T::min_positive_value() / T::epsilon();
    let mut b = x + T::one() - a;
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..max_iter {
        let fi = T::c(i as f64);
        let an = -fi * (fi - a);
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
            return Ok(ln_gamma_prefactor(a, x).exp() * h);
        }
    }
    Err(Error::Convergence {
        func: "reg_gamma continued fraction",
        iterations: max_iter,
    })
}

/// Both regularized incomplete gamma functions `(P(a, x), Q(a, x))`.
///
/// The smaller of the two is computed directly and the other as its
/// complement, so `P + Q == 1` holds exactly in floating point.
pub fn reg_gamma_pq<T: Scalar>(a: T, x: T) -> Result<(T, T)> {
    check_args("reg_gamma", a, x)?;
    if x == T::zero() {
        return Ok((T::zero(), T::one()));
    }
    if x.is_infinite() {
        return Ok((T::one(), T::zero()));
    }
    if x < a + T::one() {
        let p = series_p(a, x)?.min(T::one());
        if p <= T::c(0.5) {
            Ok((p, T::one() - p))
        } else {
            let q = cf_or_complement(a, x, p)?;
            Ok((T::one() - q, q))
        }
    } else {
        let q = cf_q(a, x)?.min(T::one());
        if q <= T::c(0.5) {
            Ok((T::one() - q, q))
        } else {
            let p = series_p(a, x)?;
            Ok((p, T::one() - p))
        }
    }
}

// Near the median with x < a + 1 the continued fraction may not converge
// quickly; the complement is then accurate anyway because P > 1/2.
fn cf_or_complement<T: Scalar>(a: T, x: T, p: T) -> Result<T> {
    if x > a * T::c(0.9) && x > T::one() {
        if let Ok(q) = cf_q(a, x) {
            return Ok(q);
        }
    }
    Ok(T::one() - p)
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn reg_gamma_p<T: Scalar>(a: T, x: T) -> Result<T> {
    Ok(reg_gamma_pq(a, x)?.0)
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn reg_gamma_q<T: Scalar>(a: T, x: T) -> Result<T> {
    Ok(reg_gamma_pq(a, x)?.1)
}

/// Inverse of `P(a, ·)`: the `x` with `P(a, x) = p`, for `0 ≤ p < 1`.
pub fn reg_gamma_p_inv<T: Scalar>(a: T, p: T) -> Result<T> {
    if !(p >= T::zero() && p < T::one()) {
        return Err(Error::domain("reg_gamma_p_inv", format!("0 <= p < 1 required, got {p}")));
    }
    check_args("reg_gamma_p_inv", a, T::zero())?;
    if p == T::zero() {
        return Ok(T::zero());
    }
    if p <= T::c(0.5) {
        gamma_inv(a, p, Tail::Lower)
    } else {
        gamma_inv(a, T::one() - p, Tail::Upper)
    }
}

/// Inverse of `Q(a, ·)`: the `x` with `Q(a, x) = q`, for `0 < q ≤ 1`.
pub fn reg_gamma_q_inv<T: Scalar>(a: T, q: T) -> Result<T> {
    if !(q > T::zero() && q <= T::one()) {
        return Err(Error::domain("reg_gamma_q_inv", format!("0 < q <= 1 required, got {q}")));
    }
    check_args("reg_gamma_q_inv", a, T::zero())?;
    if q == T::one() {
        return Ok(T::zero());
    }
    if q <= T::c(0.5) {
        gamma_inv(a, q, Tail::Upper)
    } else {
        gamma_inv(a, T::one() - q, Tail::Lower)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Tail {
    Lower,
    Upper,
}

/// Solves `tail(a, x) = target` with `target ≤ 1/2`, working on `ln tail`.
///
/// Newton steps are taken inside a maintained bracket and replaced by
/// bisection whenever they leave it.
fn gamma_inv<T: Scalar>(a: T, target: T, tail: Tail) -> Result<T> {
    let ln_target = target.ln();
    if tail == Tail::Lower {
        let ln_x0 = (ln_target + ln_gamma(a + T::one())) / a;
        if ln_x0 < T::min_positive_value().ln() {
            return Err(Error::domain(
                "reg_gamma_inv",
                format!("quantile of P({a}, .) at {target} underflows"),
            ));
        }
    }
    let eval = |x: T| -> Result<(T, T)> {
        // (ln tail(x) - ln target, d/dx of ln tail(x))
        let (p, q) = reg_gamma_pq(a, x)?;
        let v = if tail == Tail::Lower { p } else { q };
        let ln_dens = ln_gamma_prefactor(a, x) - x.ln();
        let slope = (ln_dens - v.ln()).exp();
        let slope = if tail == Tail::Lower { slope } else { -slope };
        Ok((v.ln() - ln_target, slope))
    };
    // g(x) is increasing for the lower tail and decreasing for the upper one.
    let sign = if tail == Tail::Lower { T::one() } else { -T::one() };

    let mut lo = T::zero();
    let mut hi = (a * T::c(2.0)).max(T::one());
    loop {
        let (g, _) = eval(hi)?;
        if sign * g >= T::zero() {
            break;
        }
        lo = hi;
        hi = hi * T::c(2.0);
        if hi > T::max_value() / T::c(4.0) {
            return Err(Error::Bracket {
                func: "reg_gamma_inv",
                lo: lo.as_f64(),
                hi: hi.as_f64(),
                f_lo: f64::NAN,
                f_hi: g.as_f64(),
            });
        }
    }

    let mut x = initial_guess(a, target, tail);
    if !(x > lo && x < hi) {
        x = if lo > T::zero() { (lo * hi).sqrt() } else { hi * T::c(0.5) };
    }
    for _ in 0..300 {
        let (g, gp) = eval(x)?;
        if g == T::zero() {
            return Ok(x);
        }
        if sign * g > T::zero() {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - g / gp;
        let next = if gp.is_finite() && gp != T::zero() && newton > lo && newton < hi {
            newton
        } else if lo > T::zero() && hi / lo > T::c(4.0) {
            (lo * hi).sqrt()
        } else {
            (lo + hi) * T::c(0.5)
        };
        if (next - x).abs() <= T::c(4.0) * T::epsilon() * x.abs()
            || (hi - lo) <= T::c(4.0) * T::epsilon() * hi
        {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Convergence {
        func: "reg_gamma_inv",
        iterations: 300,
    })
}

fn initial_guess<T: Scalar>(a: T, target: T, tail: Tail) -> T {
    if tail == Tail::Lower && target < T::c(0.05) {
        // P(a, x) ≈ x^a / Γ(a + 1) near zero
        return ((target.ln() + ln_gamma(a + T::one())) / a).exp();
    }
    // Wilson–Hilferty cube-root normal approximation.
    let z = match super::normal::p_to_z(target) {
        Ok(z) => z,
        Err(_) => return a,
    };
    let z = if tail == Tail::Lower { -z } else { z };
    let k = T::one() / (T::c(9.0) * a);
    let base = T::one() - k + z * k.sqrt();
    if base <= T::zero() {
        return a * T::c(0.01);
    }
    a * base * base * base
}

/// `p`-quantile of the chi-squared distribution with `dof` degrees of freedom.
pub fn chi2_quantile<T: Scalar>(dof: T, p: T) -> Result<T> {
    Ok(T::c(2.0) * reg_gamma_p_inv(dof / T::c(2.0), p)?)
}
