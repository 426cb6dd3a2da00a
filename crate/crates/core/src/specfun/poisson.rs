//! Poisson probabilities and tails.
//!
//! Below `EXACT_LIMIT` the smaller tail is summed term by term from the
//! observed count outward; beyond it the incomplete-gamma identity
//! `P(N ≤ n | μ) = Q(n + 1, μ)` is used.

use super::gamma::{ln_gamma_prefactor, reg_gamma_pq};
use crate::error::{Error, Result};

const EXACT_LIMIT: u64 = 1_000_000;
const MAX_TERMS: usize = 200_000;

fn check_mean(func: &'static str, mu: f64) -> Result<()> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::domain(func, format!("mean must be finite and non-negative, got {mu}")));
    }
    Ok(())
}

/// `ln P(N = n | μ)`; `-∞` when the mass is zero.
pub fn ln_poisson_pmf(mu: f64, n: u64) -> Result<f64> {
    check_mean("ln_poisson_pmf", mu)?;
    if mu == 0.0 {
        return Ok(if n == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    if n == 0 {
        return Ok(-mu);
    }
    // μ^n e^{-μ} / n! = [μ^{n+1} e^{-μ} / Γ(n+1)] / μ
    Ok(ln_gamma_prefactor(n as f64 + 1.0, mu) - mu.ln())
}

/// `P(N = n | μ)`.
pub fn poisson_pmf(mu: f64, n: u64) -> Result<f64> {
    Ok(ln_poisson_pmf(mu, n)?.exp())
}

/// Sum of pmf(i) for i = n, n-1, ..., 0.
fn sum_down(mu: f64, n: u64) -> Option<f64> {
    let mut term = ln_poisson_pmf(mu, n).ok()?.exp();
    let mut sum = term;
    let mut i = n;
    while i > 0 {
        term *= i as f64 / mu;
        sum += term;
        i -= 1;
        if term <= sum * f64::EPSILON * 0.25 {
            return Some(sum);
        }
        if (n - i) as usize > MAX_TERMS {
            return None;
        }
    }
    Some(sum)
}

/// Sum of pmf(i) for i = m, m+1, ...
fn sum_up(mu: f64, m: u64) -> Option<f64> {
    let mut term = ln_poisson_pmf(mu, m).ok()?.exp();
    let mut sum = term;
    let mut i = m;
    for _ in 0..MAX_TERMS {
        i += 1;
        term *= mu / i as f64;
        sum += term;
        if term <= sum * f64::EPSILON * 0.25 && (i as f64) > mu {
            return Some(sum);
        }
    }
    None
}

/// `(P(N ≤ n | μ), P(N > n | μ))`.
fn cdf_pair(mu: f64, n: u64) -> Result<(f64, f64)> {
    if mu == 0.0 {
        return Ok((1.0, 0.0));
    }
    if n < EXACT_LIMIT {
        let direct = if (n as f64) < mu {
            sum_down(mu, n).map(|le| (le, None))
        } else {
            sum_up(mu, n + 1).map(|gt| (gt, Some(())))
        };
        match direct {
            Some((v, None)) if v <= 0.5 => return Ok((v, 1.0 - v)),
            Some((v, Some(()))) if v <= 0.5 => return Ok((1.0 - v, v)),
            Some(_) => {
                // Near the mode both tails are moderate: sum each directly.
                if let (Some(le), Some(gt)) = (sum_down(mu, n), sum_up(mu, n + 1)) {
                    let total = le + gt;
                    return Ok((le / total, gt / total));
                }
            }
            None => {}
        }
    }
    let (p, q) = reg_gamma_pq(n as f64 + 1.0, mu)?;
    Ok((q, p))
}

/// Left tail `P(N ≤ n | μ)`, including the observed count.
pub fn poisson_left_tail(mu: f64, n: u64) -> Result<f64> {
    check_mean("poisson_left_tail", mu)?;
    Ok(cdf_pair(mu, n)?.0)
}

/// Right tail `P(N ≥ n | μ)`, including the observed count.
pub fn poisson_right_tail(mu: f64, n: u64) -> Result<f64> {
    check_mean("poisson_right_tail", mu)?;
    if n == 0 {
        return Ok(1.0);
    }
    Ok(cdf_pair(mu, n - 1)?.1)
}
