//! The four hypothesis families: one-sided p-values, densities and
//! likelihood ratios for a simple H0 against a simple H1.
//!
//! Tails always point toward the other hypothesis. For Gauss, Cauchy and
//! Poisson that means large observations count against H0 when
//! `mu1 > mu0`. Gamma is parametrized by a rate, so a larger rate under H1
//! concentrates H1 at small `t` and small observations count against H0.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{
    ln_gamma, ln_poisson_pmf, normal_pdf, p_to_z, poisson_left_tail, poisson_right_tail,
    reg_gamma_p_inv, reg_gamma_pq, z_to_p,
};
use crate::Real;

/// Distribution family of the test statistic and its fixed shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum HypothesisFamily {
    /// Normal location family with known width.
    Gauss { sigma: Real },
    /// Cauchy location family with known half-width.
    Cauchy { gamma: Real },
    /// Sum of `n` exponential decay times; the tested parameter is the rate.
    Gamma { n: u32 },
    /// Event count with the tested parameter as its mean.
    Poisson,
}

impl HypothesisFamily {
    pub fn name(&self) -> &'static str {
        match self {
            HypothesisFamily::Gauss { .. } => "gauss",
            HypothesisFamily::Cauchy { .. } => "cauchy",
            HypothesisFamily::Gamma { .. } => "gamma",
            HypothesisFamily::Poisson => "poisson",
        }
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self, HypothesisFamily::Poisson)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            HypothesisFamily::Gauss { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                Err(Error::domain("HypothesisFamily", format!("sigma must be positive, got {sigma}")))
            }
            HypothesisFamily::Cauchy { gamma } if !(gamma > 0.0 && gamma.is_finite()) => {
                Err(Error::domain("HypothesisFamily", format!("gamma must be positive, got {gamma}")))
            }
            HypothesisFamily::Gamma { n: 0 } => {
                Err(Error::domain("HypothesisFamily", "gamma family needs n >= 1"))
            }
            _ => Ok(()),
        }
    }
}

/// Which of the two simple hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    H0,
    H1,
}

/// An observed value of the test statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Observation {
    /// `t` for Gauss and Cauchy; the summed decay time for Gamma.
    Continuous(Real),
    /// Observed event count for Poisson.
    Count(u64),
}

/// A pair of p-values, one per hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PPoint {
    pub p0: Real,
    pub p1: Real,
}

impl PPoint {
    pub fn new(p0: Real, p1: Real) -> Self {
        PPoint { p0, p1 }
    }

    /// Swaps the roles of the two hypotheses.
    pub fn swapped(self) -> Self {
        PPoint {
            p0: self.p1,
            p1: self.p0,
        }
    }
}

/// A family together with the two simple hypothesis values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleTest {
    family: HypothesisFamily,
    mu0: Real,
    mu1: Real,
}

impl SimpleTest {
    pub fn new(family: HypothesisFamily, mu0: Real, mu1: Real) -> Result<Self> {
        family.validate()?;
        if !mu0.is_finite() || !mu1.is_finite() {
            return Err(Error::domain("SimpleTest", "hypothesis values must be finite"));
        }
        if matches!(family, HypothesisFamily::Gamma { .. } | HypothesisFamily::Poisson)
            && !(mu0 > 0.0 && mu1 > 0.0)
        {
            return Err(Error::domain(
                "SimpleTest",
                format!("{} parameters must be positive, got {mu0}, {mu1}", family.name()),
            ));
        }
        Ok(SimpleTest { family, mu0, mu1 })
    }

    pub fn gauss(sigma: Real, mu0: Real, mu1: Real) -> Result<Self> {
        Self::new(HypothesisFamily::Gauss { sigma }, mu0, mu1)
    }

    pub fn cauchy(gamma: Real, mu0: Real, mu1: Real) -> Result<Self> {
        Self::new(HypothesisFamily::Cauchy { gamma }, mu0, mu1)
    }

    pub fn gamma(n: u32, mu0: Real, mu1: Real) -> Result<Self> {
        Self::new(HypothesisFamily::Gamma { n }, mu0, mu1)
    }

    pub fn poisson(mu0: Real, mu1: Real) -> Result<Self> {
        Self::new(HypothesisFamily::Poisson, mu0, mu1)
    }

    pub fn family(&self) -> HypothesisFamily {
        self.family
    }

    pub fn mu0(&self) -> Real {
        self.mu0
    }

    pub fn mu1(&self) -> Real {
        self.mu1
    }

    pub fn mu(&self, h: Hypothesis) -> Real {
        match h {
            Hypothesis::H0 => self.mu0,
            Hypothesis::H1 => self.mu1,
        }
    }

    /// True when large observations favor H1.
    pub fn h1_above(&self) -> bool {
        match self.family {
            HypothesisFamily::Gamma { .. } => self.mu1 < self.mu0,
            _ => self.mu1 >= self.mu0,
        }
    }

    /// Separation in the units the family's contours depend on:
    /// `|Δμ|/σ`, `|Δμ|/γ`, or the rate ratio `μ1/μ0` for Gamma.
    /// Poisson contours depend on both means, so this is `μ1 - μ0`.
    pub fn separation(&self) -> Real {
        let d = (self.mu1 - self.mu0).abs();
        match self.family {
            HypothesisFamily::Gauss { sigma } => d / sigma,
            HypothesisFamily::Cauchy { gamma } => d / gamma,
            HypothesisFamily::Gamma { .. } => self.mu1 / self.mu0,
            HypothesisFamily::Poisson => self.mu1 - self.mu0,
        }
    }

    fn check_obs(&self, obs: Observation) -> Result<()> {
        match (self.family, obs) {
            (HypothesisFamily::Poisson, Observation::Count(_)) => Ok(()),
            (HypothesisFamily::Poisson, _) => {
                Err(Error::domain("p_values", "poisson family needs a count observation"))
            }
            (_, Observation::Count(_)) => {
                Err(Error::domain("p_values", "continuous family needs a real observation"))
            }
            (HypothesisFamily::Gamma { .. }, Observation::Continuous(t)) if !(t > 0.0 && t.is_finite()) => {
                Err(Error::domain("p_values", format!("gamma observation must be positive, got {t}")))
            }
            (_, Observation::Continuous(t)) if !t.is_finite() => {
                Err(Error::domain("p_values", format!("observation must be finite, got {t}")))
            }
            _ => Ok(()),
        }
    }

    /// One-sided p-values of `obs` under each hypothesis.
    ///
    /// For Poisson both tails include the probability of the observed count.
    pub fn p_values(&self, obs: Observation) -> Result<PPoint> {
        self.check_obs(obs)?;
        let up = self.h1_above();
        let p = match (self.family, obs) {
            (HypothesisFamily::Gauss { sigma }, Observation::Continuous(t)) => {
                let z0 = (t - self.mu0) / sigma;
                let p0 = z_to_p(if up { z0 } else { -z0 });
                if self.mu0 == self.mu1 {
                    PPoint::new(p0, 1.0 - p0)
                } else {
                    let z1 = (self.mu1 - t) / sigma;
                    PPoint::new(p0, z_to_p(if up { z1 } else { -z1 }))
                }
            }
            (HypothesisFamily::Cauchy { gamma }, Observation::Continuous(t)) => {
                let u0 = (t - self.mu0) / gamma;
                let p0 = cauchy_sf(if up { u0 } else { -u0 });
                if self.mu0 == self.mu1 {
                    PPoint::new(p0, 1.0 - p0)
                } else {
                    let u1 = (self.mu1 - t) / gamma;
                    PPoint::new(p0, cauchy_sf(if up { u1 } else { -u1 }))
                }
            }
            (HypothesisFamily::Gamma { n }, Observation::Continuous(t)) => {
                let n = n as Real;
                let (lo0, hi0) = reg_gamma_pq(n, self.mu0 * t)?;
                if self.mu0 == self.mu1 {
                    // Identical hypotheses: tails are complementary by construction.
                    return Ok(if up { PPoint::new(hi0, lo0) } else { PPoint::new(lo0, hi0) });
                }
                let (lo1, hi1) = reg_gamma_pq(n, self.mu1 * t)?;
                if up {
                    PPoint::new(hi0, lo1)
                } else {
                    PPoint::new(lo0, hi1)
                }
            }
            (HypothesisFamily::Poisson, Observation::Count(k)) => {
                if up {
                    PPoint::new(poisson_right_tail(self.mu0, k)?, poisson_left_tail(self.mu1, k)?)
                } else {
                    PPoint::new(poisson_left_tail(self.mu0, k)?, poisson_right_tail(self.mu1, k)?)
                }
            }
            _ => unreachable!("observation kind checked above"),
        };
        Ok(p)
    }

    /// Log density (log mass for Poisson) of `obs` under `h`.
    pub fn ln_density(&self, h: Hypothesis, obs: Observation) -> Result<Real> {
        self.check_obs(obs)?;
        let mu = self.mu(h);
        Ok(match (self.family, obs) {
            (HypothesisFamily::Gauss { sigma }, Observation::Continuous(t)) => {
                let z = (t - mu) / sigma;
                -0.5 * z * z - (sigma * (2.0 * PI).sqrt()).ln()
            }
            (HypothesisFamily::Cauchy { gamma }, Observation::Continuous(t)) => {
                let u = (t - mu) / gamma;
                -(PI * gamma).ln() - u.mul_add(u, 1.0).ln()
            }
            (HypothesisFamily::Gamma { n }, Observation::Continuous(t)) => {
                let n = n as Real;
                n * mu.ln() + (n - 1.0) * t.ln() - mu * t - ln_gamma(n)
            }
            (HypothesisFamily::Poisson, Observation::Count(k)) => ln_poisson_pmf(mu, k)?,
            _ => unreachable!("observation kind checked above"),
        })
    }

    /// Density (mass for Poisson) of `obs` under `h`.
    pub fn density(&self, h: Hypothesis, obs: Observation) -> Result<Real> {
        Ok(self.ln_density(h, obs)?.exp())
    }

    /// `ln λ01 = ln f0(obs) - ln f1(obs)`, formed without evaluating the
    /// densities separately so it stays finite far in the tails.
    pub fn ln_likelihood_ratio(&self, obs: Observation) -> Result<Real> {
        self.check_obs(obs)?;
        if self.mu0 == self.mu1 {
            return Ok(0.0);
        }
        let (m0, m1) = (self.mu0, self.mu1);
        Ok(match (self.family, obs) {
            (HypothesisFamily::Gauss { sigma }, Observation::Continuous(t)) => {
                let (z0, z1) = ((t - m0) / sigma, (t - m1) / sigma);
                0.5 * (z1 - z0) * (z1 + z0)
            }
            (HypothesisFamily::Cauchy { gamma }, Observation::Continuous(t)) => {
                let (u0, u1) = ((t - m0) / gamma, (t - m1) / gamma);
                u1.mul_add(u1, 1.0).ln() - u0.mul_add(u0, 1.0).ln()
            }
            (HypothesisFamily::Gamma { n }, Observation::Continuous(t)) => {
                n as Real * (m0 / m1).ln() - (m0 - m1) * t
            }
            (HypothesisFamily::Poisson, Observation::Count(k)) => k as Real * (m0 / m1).ln() - (m0 - m1),
            _ => unreachable!("observation kind checked above"),
        })
    }

    /// Likelihood ratio `λ01 = L0 / L1`.
    pub fn likelihood_ratio(&self, obs: Observation) -> Result<Real> {
        Ok(self.ln_likelihood_ratio(obs)?.exp())
    }

    /// The observation whose p-value under H0 is `p0` (continuous families).
    pub fn observation_for_p0(&self, p0: Real) -> Result<Real> {
        if !(p0 > 0.0 && p0 < 1.0) {
            return Err(Error::domain("observation_for_p0", format!("0 < p0 < 1 required, got {p0}")));
        }
        let up = self.h1_above();
        let sign = if up { 1.0 } else { -1.0 };
        match self.family {
            HypothesisFamily::Gauss { sigma } => Ok(self.mu0 + sign * sigma * p_to_z(p0)?),
            HypothesisFamily::Cauchy { gamma } => Ok(self.mu0 + sign * gamma * cauchy_isf(p0)),
            HypothesisFamily::Gamma { n } => {
                let x = if up {
                    crate::specfun::reg_gamma_q_inv(n as Real, p0)?
                } else {
                    reg_gamma_p_inv(n as Real, p0)?
                };
                Ok(x / self.mu0)
            }
            HypothesisFamily::Poisson => Err(Error::FamilyMismatch(
                "poisson observations are discrete; enumerate counts instead".into(),
            )),
        }
    }

    /// Draws one observation under hypothesis `h`.
    pub fn sample<R: Rng + ?Sized>(&self, h: Hypothesis, rng: &mut R) -> Observation {
        let mu = self.mu(h);
        match self.family {
            HypothesisFamily::Gauss { sigma } => {
                let z: Real = StandardNormal.sample(rng);
                Observation::Continuous(mu + sigma * z)
            }
            HypothesisFamily::Cauchy { gamma } => {
                let u: Real = rng.random::<Real>();
                Observation::Continuous(mu + gamma * (PI * (u - 0.5)).tan())
            }
            HypothesisFamily::Gamma { n } => {
                let g = rand_distr::Gamma::new(n as Real, 1.0 / mu).expect("validated shape and rate");
                Observation::Continuous(g.sample(rng))
            }
            HypothesisFamily::Poisson => {
                let p = rand_distr::Poisson::new(mu).expect("validated mean");
                Observation::Count(p.sample(rng) as u64)
            }
        }
    }
}

/// Upper tail of the standard Cauchy distribution, accurate for large `u`.
pub fn cauchy_sf(u: Real) -> Real {
    if u > 0.0 {
        (1.0 / u).atan() / PI
    } else {
        0.5 + (-u).atan() / PI
    }
}

/// Inverse of [`cauchy_sf`] on `(0, 1)`.
pub fn cauchy_isf(p: Real) -> Real {
    if (0.25..=0.75).contains(&p) {
        // 0.5 - p is exact here, so the median maps to exactly zero
        (PI * (0.5 - p)).tan()
    } else if p < 0.5 {
        1.0 / (PI * p).tan()
    } else {
        -1.0 / (PI * (1.0 - p)).tan()
    }
}

/// Density of `q = ln λ01` for the Gauss family under `h`: normal with mean
/// `±s²/2` and width `s = |Δμ|/σ`.
pub fn loglr_pdf(test: &SimpleTest, h: Hypothesis, q: Real) -> Result<Real> {
    let HypothesisFamily::Gauss { .. } = test.family() else {
        return Err(Error::FamilyMismatch(format!(
            "log-likelihood-ratio density is closed-form only for gauss, not {}",
            test.family().name()
        )));
    };
    let s = test.separation();
    if s == 0.0 {
        return Err(Error::Degenerate("ln λ01 is identically zero when μ0 = μ1".into()));
    }
    let mean = match h {
        Hypothesis::H0 => 0.5 * s * s,
        Hypothesis::H1 => -0.5 * s * s,
    };
    Ok(normal_pdf((q - mean) / s) / s)
}

/// Maps a Gaussian variate with mean `mu0` and width `sigma` onto a Cauchy
/// variate with mode `mu_c` and half-width `gamma`, matching tail areas.
pub fn gauss_to_cauchy_transform(x: Real, mu0: Real, sigma: Real, mu_c: Real, gamma: Real) -> Real {
    let z = (x - mu0) / sigma;
    mu_c + gamma * cauchy_isf(z_to_p(z))
}

/// Density of the transformed variate when the Gaussian is centred
/// `dmu_over_sigma` widths above `mu0` instead of at it.
pub fn transformed_pdf(y: Real, mu_c: Real, gamma: Real, dmu_over_sigma: Real) -> Real {
    let u = (y - mu_c) / gamma;
    let cauchy = 1.0 / (PI * gamma * u.mul_add(u, 1.0));
    if dmu_over_sigma == 0.0 {
        return cauchy;
    }
    // Gaussian significance with the same upper tail as u.
    let z = p_to_z(cauchy_sf(u)).unwrap_or(if u > 0.0 { Real::INFINITY } else { Real::NEG_INFINITY });
    let s = dmu_over_sigma;
    let w = (-0.5 * s * s + s * z).exp();
    if w == 0.0 { 0.0 } else { w * cauchy }
}
