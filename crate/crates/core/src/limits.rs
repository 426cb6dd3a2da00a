//! Upper limits on a parameter μ bounded below by `mu_floor`: standard
//! frequentist, CLs, and flat-prior Bayesian.
//!
//! For a location family or a Poisson mean, the CLs limit and the Bayesian
//! limit coincide. [`verify_bayes_cls_equality`] computes both along
//! separate paths and reports how far apart they land.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{cauchy_sf, Observation};
use crate::numeric::{bisect, integrate, QuadOptions};
use crate::specfun::{normal_cdf, poisson_left_tail, reg_gamma_q, z_to_p};
use crate::Real;

/// Limits beyond `mu_floor + CAP_SCALES · scale` are reported as overflow.
pub const CAP_SCALES: Real = 1e6;
const ROOT_TOL: Real = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LimitFamily {
    GaussLocation { sigma: Real },
    CauchyLocation { gamma: Real },
    Poisson,
}

impl LimitFamily {
    pub fn name(&self) -> &'static str {
        match self {
            LimitFamily::GaussLocation { .. } => "gauss",
            LimitFamily::CauchyLocation { .. } => "cauchy",
            LimitFamily::Poisson => "poisson",
        }
    }

    fn scale(&self) -> Real {
        match *self {
            LimitFamily::GaussLocation { sigma } => sigma,
            LimitFamily::CauchyLocation { gamma } => gamma,
            LimitFamily::Poisson => 1.0,
        }
    }
}

/// One upper-limit problem: `H0[μ*]: μ = μ*` against `H1[μ*]: μ > μ*`
/// with `μ* = mu_floor` the lower edge of the parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRequest {
    #[serde(flatten)]
    pub family: LimitFamily,
    pub observation: Observation,
    /// `-∞` is allowed for location families.
    pub mu_floor: Real,
    /// Confidence or credibility level.
    pub gamma: Real,
}

impl LimitRequest {
    pub fn new(family: LimitFamily, observation: Observation, mu_floor: Real, gamma: Real) -> Result<Self> {
        let r = LimitRequest {
            family,
            observation,
            mu_floor,
            gamma,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::domain("LimitRequest", format!("gamma must lie in (0, 1), got {}", self.gamma)));
        }
        if self.mu_floor.is_nan() || self.mu_floor == Real::INFINITY {
            return Err(Error::domain("LimitRequest", format!("invalid floor {}", self.mu_floor)));
        }
        match (self.family, self.observation) {
            (LimitFamily::GaussLocation { sigma: s } | LimitFamily::CauchyLocation { gamma: s }, Observation::Continuous(x)) => {
                if !(s > 0.0 && s.is_finite() && x.is_finite()) {
                    return Err(Error::domain("LimitRequest", "scale must be positive and observation finite"));
                }
            }
            (LimitFamily::Poisson, Observation::Count(_)) => {
                if !(self.mu_floor >= 0.0) {
                    return Err(Error::domain("LimitRequest", format!("poisson floor must be >= 0, got {}", self.mu_floor)));
                }
            }
            _ => {
                return Err(Error::FamilyMismatch(format!(
                    "{} limits need a {} observation",
                    self.family.name(),
                    if self.family == LimitFamily::Poisson { "count" } else { "continuous" }
                )))
            }
        }
        Ok(())
    }

    fn x(&self) -> Real {
        match self.observation {
            Observation::Continuous(x) => x,
            Observation::Count(n) => n as Real,
        }
    }

    /// `P(X ≤ x0 | μ)`, the p-value of `H1[μ]`.
    fn p1(&self, mu: Real) -> Result<Real> {
        Ok(match (self.family, self.observation) {
            (LimitFamily::GaussLocation { sigma }, Observation::Continuous(x)) => z_to_p((mu - x) / sigma),
            (LimitFamily::CauchyLocation { gamma }, Observation::Continuous(x)) => cauchy_sf((mu - x) / gamma),
            (LimitFamily::Poisson, Observation::Count(n)) => poisson_left_tail(mu.max(0.0), n)?,
            _ => unreachable!("validated"),
        })
    }

    /// `1 - p0(μ_floor)`. For counts the observed value is included, so
    /// this is `P(N ≤ n | μ_floor)`.
    fn cls_denominator(&self) -> Result<Real> {
        if self.mu_floor == Real::NEG_INFINITY {
            return Ok(1.0);
        }
        self.p1(self.mu_floor)
    }

    /// Lowest μ the parameter space allows.
    fn domain_floor(&self) -> Real {
        match self.family {
            LimitFamily::Poisson => 0.0,
            _ => Real::NEG_INFINITY,
        }
    }

    fn cap(&self) -> Real {
        let base = if self.mu_floor.is_finite() { self.mu_floor } else { self.x() };
        base.max(self.x()) + CAP_SCALES * self.family.scale()
    }
}

/// Root of a nonincreasing `g(μ) = target` on `[floor, cap]`, starting the
/// bracket search at `start`.
fn solve_decreasing<G>(mut g: G, target: Real, start: Real, scale: Real, floor: Real, cap: Real, what: &str) -> Result<Real>
where
    G: FnMut(Real) -> Result<Real>,
{
    let min_lo = floor.max(start - CAP_SCALES * scale);
    let mut lo = start.max(floor);
    let mut step = scale;
    while g(lo)? < target {
        if lo <= min_lo {
            return Err(Error::NoSolution(format!("{what}: no bracket down to {min_lo}")));
        }
        lo = (lo - step).max(min_lo);
        step *= 2.0;
    }
    let mut hi = lo + scale;
    let mut step = scale;
    while g(hi)? > target {
        if hi >= cap {
            return Err(Error::Overflow(format!("{what}: limit exceeds the parameter cap {cap}")));
        }
        step *= 2.0;
        hi = (hi + step).min(cap);
    }
    let mut err = None;
    let root = bisect(
        |mu| match g(mu) {
            Ok(v) => v - target,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
        ROOT_TOL,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(root),
    }
}

/// Solves `p1(μ_U) = 1 - γ`.
pub fn frequentist_upper_limit(req: &LimitRequest) -> Result<Real> {
    req.validate()?;
    let floor = req.domain_floor();
    let cap = req.x().max(floor) + CAP_SCALES * req.family.scale();
    solve_decreasing(|mu| req.p1(mu), 1.0 - req.gamma, req.x(), req.family.scale(), floor, cap, "frequentist_upper_limit")
}

/// Solves `p1(μ_U) / (1 - p0(μ_floor)) = 1 - γ`.
pub fn cls_upper_limit(req: &LimitRequest) -> Result<Real> {
    req.validate()?;
    let denom = req.cls_denominator()?;
    if !(denom > 0.0) {
        return Err(Error::Degenerate(format!("1 - p0 vanishes at the floor {}", req.mu_floor)));
    }
    let floor = req.mu_floor.max(req.domain_floor());
    solve_decreasing(
        |mu| Ok(req.p1(mu)? / denom),
        1.0 - req.gamma,
        req.x(),
        req.family.scale(),
        floor,
        req.cap(),
        "cls_upper_limit",
    )
}

/// Posterior survival `P(μ > m | x0)` under a flat prior on `μ > μ_floor`.
struct Posterior<'a> {
    req: &'a LimitRequest,
    /// Unnormalized mass above the floor, for the quadrature path.
    norm: Real,
}

impl<'a> Posterior<'a> {
    fn new(req: &'a LimitRequest) -> Result<Self> {
        let norm = match req.family {
            LimitFamily::CauchyLocation { gamma } => {
                let x = req.x();
                let lik = |mu: Real| cauchy_likelihood(x, mu, gamma);
                let opts = QuadOptions::with_rel_tol(1e-12);
                let floor = req.mu_floor;
                if floor == Real::NEG_INFINITY {
                    integrate(lik, Real::NEG_INFINITY, x, opts)?.value + integrate(lik, x, Real::INFINITY, opts)?.value
                } else if floor < x {
                    integrate(lik, floor, x, opts)?.value + integrate(lik, x, Real::INFINITY, opts)?.value
                } else {
                    integrate(lik, floor, Real::INFINITY, opts)?.value
                }
            }
            _ => 1.0,
        };
        if !(norm > 0.0) {
            return Err(Error::Degenerate("posterior normalization vanished".into()));
        }
        Ok(Posterior { req, norm })
    }

    fn survival(&self, m: Real) -> Result<Real> {
        let r = self.req;
        let floor = r.mu_floor;
        match (r.family, r.observation) {
            // truncated Gaussian centred on the observation
            (LimitFamily::GaussLocation { sigma }, Observation::Continuous(x)) => {
                let tail = |v: Real| {
                    let u = (v - x) / sigma;
                    if u < 0.0 {
                        1.0 - normal_cdf(u)
                    } else {
                        normal_cdf(-u)
                    }
                };
                let below = if floor == Real::NEG_INFINITY { 1.0 } else { tail(floor) };
                Ok(tail(m) / below)
            }
            // Gamma(n + 1, 1) posterior
            (LimitFamily::Poisson, Observation::Count(n)) => {
                let a = n as Real + 1.0;
                Ok(reg_gamma_q(a, m.max(0.0))? / reg_gamma_q(a, floor)?)
            }
            (LimitFamily::CauchyLocation { gamma }, Observation::Continuous(x)) => {
                let lik = |mu: Real| cauchy_likelihood(x, mu, gamma);
                let opts = QuadOptions::with_rel_tol(1e-12);
                let upper = if m < x {
                    integrate(lik, m, x, opts)?.value + integrate(lik, x, Real::INFINITY, opts)?.value
                } else {
                    integrate(lik, m, Real::INFINITY, opts)?.value
                };
                Ok(upper / self.norm)
            }
            _ => unreachable!("validated"),
        }
    }
}

fn cauchy_likelihood(x: Real, mu: Real, gamma: Real) -> Real {
    let u = (x - mu) / gamma;
    1.0 / (std::f64::consts::PI * gamma * (1.0 + u * u))
}

/// γ-quantile of the flat-prior posterior truncated to `μ > μ_floor`.
pub fn bayes_upper_limit(req: &LimitRequest) -> Result<Real> {
    req.validate()?;
    let post = Posterior::new(req)?;
    let floor = req.mu_floor.max(req.domain_floor());
    solve_decreasing(|m| post.survival(m), 1.0 - req.gamma, req.x(), req.family.scale(), floor, req.cap(), "bayes_upper_limit")
}

/// The three limits of one request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub family: &'static str,
    pub observation: Observation,
    pub gamma: Real,
    pub freq_ul: Real,
    pub cls_ul: Real,
    pub bayes_ul: Real,
    /// `|cls_ul - bayes_ul|`
    pub max_abs_diff: Real,
}

pub fn limit_report(req: &LimitRequest) -> Result<LimitReport> {
    let freq_ul = frequentist_upper_limit(req)?;
    let cls_ul = cls_upper_limit(req)?;
    let bayes_ul = bayes_upper_limit(req)?;
    Ok(LimitReport {
        family: req.family.name(),
        observation: req.observation,
        gamma: req.gamma,
        freq_ul,
        cls_ul,
        bayes_ul,
        max_abs_diff: (cls_ul - bayes_ul).abs(),
    })
}

/// CLs against Bayes over a grid of observations and levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub family: &'static str,
    pub mu_floor: Real,
    pub rows: Vec<LimitReport>,
    pub max_abs_diff: Real,
    /// Largest `|cls - bayes| / (1 + |cls|)`.
    pub max_scaled_diff: Real,
    pub tolerance: Real,
    pub passed: bool,
}

/// Tolerance on `|cls - bayes| / (1 + |μ_U|)`.
pub const EQUALITY_TOL: Real = 1e-6;

/// Runs [`limit_report`] over every (observation, γ) pair in parallel.
pub fn verify_bayes_cls_equality(
    family: LimitFamily,
    mu_floor: Real,
    observations: &[Observation],
    gammas: &[Real],
) -> Result<EqualityReport> {
    if family == LimitFamily::Poisson && !(mu_floor >= 0.0) {
        return Err(Error::domain("verify_bayes_cls_equality", "poisson floor must be >= 0"));
    }
    let reqs: Vec<LimitRequest> = observations
        .iter()
        .flat_map(|&o| gammas.iter().map(move |&g| (o, g)))
        .map(|(o, g)| LimitRequest::new(family, o, mu_floor, g))
        .collect::<Result<_>>()?;
    let rows: Vec<LimitReport> = reqs.par_iter().map(limit_report).collect::<Result<_>>()?;
    let max_abs_diff = rows.iter().map(|r| r.max_abs_diff).fold(0.0, Real::max);
    let max_scaled_diff = rows
        .iter()
        .map(|r| r.max_abs_diff / (1.0 + r.cls_ul.abs()))
        .fold(0.0, Real::max);
    Ok(EqualityReport {
        family: family.name(),
        mu_floor,
        rows,
        max_abs_diff,
        max_scaled_diff,
        tolerance: EQUALITY_TOL,
        passed: max_scaled_diff <= EQUALITY_TOL,
    })
}

/// Exclusion counts of the true value over seeded Gaussian pseudo-experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub trials: u64,
    pub mu_true: Real,
    pub gamma: Real,
    /// Trials whose frequentist limit fell below the true value.
    pub freq_exclusions: u64,
    pub cls_exclusions: u64,
}

impl CoverageReport {
    pub fn freq_rate(&self) -> Real {
        self.freq_exclusions as Real / self.trials as Real
    }

    pub fn cls_rate(&self) -> Real {
        self.cls_exclusions as Real / self.trials as Real
    }
}

/// Draws `x ~ N(μ_true, σ)` and checks whether each limit excludes
/// `μ_true`. Trial `i` uses stream `i` of `seed`.
pub fn gauss_coverage(sigma: Real, mu_floor: Real, mu_true: Real, gamma: Real, trials: u64, seed: u64) -> Result<CoverageReport> {
    if mu_true < mu_floor {
        return Err(Error::domain("gauss_coverage", "true value lies below the floor"));
    }
    let family = LimitFamily::GaussLocation { sigma };
    let hits: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let z: Real = StandardNormal.sample(&mut rng);
            let req = LimitRequest::new(family, Observation::Continuous(mu_true + sigma * z), mu_floor, gamma)?;
            Ok((frequentist_upper_limit(&req)? < mu_true, cls_upper_limit(&req)? < mu_true))
        })
        .collect::<Result<_>>()?;
    Ok(CoverageReport {
        trials,
        mu_true,
        gamma,
        freq_exclusions: hits.iter().filter(|h| h.0).count() as u64,
        cls_exclusions: hits.iter().filter(|h| h.1).count() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(x: Real, floor: Real, g: Real) -> LimitRequest {
        LimitRequest::new(LimitFamily::GaussLocation { sigma: 1.0 }, Observation::Continuous(x), floor, g).unwrap()
    }

    fn poisson(n: u64, floor: Real, g: Real) -> LimitRequest {
        LimitRequest::new(LimitFamily::Poisson, Observation::Count(n), floor, g).unwrap()
    }

    #[test]
    fn gauss_limits() {
        let r = gauss(0.0, Real::NEG_INFINITY, 0.95);
        assert!((frequentist_upper_limit(&r).unwrap() - 1.6448536269514722).abs() < 1e-9);
        assert!((cls_upper_limit(&r).unwrap() - 1.6448536269514722).abs() < 1e-9);
        let r = gauss(0.0, 0.0, 0.95);
        assert!((cls_upper_limit(&r).unwrap() - 1.959963984540054).abs() < 1e-9);
        assert!((bayes_upper_limit(&r).unwrap() - 1.959963984540054).abs() < 1e-9);
        assert!(frequentist_upper_limit(&gauss(0.0, 0.0, 0.5)).unwrap().abs() < 1e-9);
    }

    #[test]
    fn poisson_limits() {
        let r = poisson(0, 0.0, 0.95);
        for ul in [frequentist_upper_limit(&r), cls_upper_limit(&r), bayes_upper_limit(&r)] {
            assert!((ul.unwrap() - 2.995732273553991).abs() < 1e-9);
        }
    }

    #[test]
    fn ordering_and_equality() {
        for x in [-2.0, 0.0, 1.5, 4.0] {
            let r = gauss(x, 0.0, 0.9);
            let rep = limit_report(&r).unwrap();
            assert!(rep.freq_ul <= rep.cls_ul);
            assert!(rep.max_abs_diff < 1e-8);
        }
        let r = LimitRequest::new(LimitFamily::CauchyLocation { gamma: 1.0 }, Observation::Continuous(1.0), 0.0, 0.9).unwrap();
        let rep = limit_report(&r).unwrap();
        assert!(rep.max_abs_diff < 1e-7, "{rep:?}");
    }

    #[test]
    fn overflow_near_one() {
        let r = LimitRequest::new(
            LimitFamily::CauchyLocation { gamma: 1.0 },
            Observation::Continuous(0.0),
            0.0,
            1.0 - 1e-9,
        )
        .unwrap();
        assert!(matches!(cls_upper_limit(&r), Err(Error::Overflow(_))));
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(LimitRequest::new(LimitFamily::Poisson, Observation::Continuous(1.0), 0.0, 0.9).is_err());
        assert!(LimitRequest::new(LimitFamily::Poisson, Observation::Count(1), -1.0, 0.9).is_err());
        assert!(LimitRequest::new(LimitFamily::GaussLocation { sigma: 1.0 }, Observation::Continuous(0.0), 0.0, 1.0).is_err());
    }
}
