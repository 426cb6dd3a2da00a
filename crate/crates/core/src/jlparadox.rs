//! Point null `μ = μ0` (or interval null `μ0 - ε < μ ≤ μ0`) against the
//! composite `μ > μ0`, for a Gaussian measurement of `μ` with resolution σ
//! and a uniform prior of width τ on `(μ0, μ0 + τ]`.
//!
//! Every prior average of the Gaussian kernel has a closed form in terms of
//! `Φ` and its antiderivative `G(x) = xΦ(x) + φ(x)`. The quadrature paths
//! exist as independent cross-checks.

use serde::{Deserialize, Serialize};

use crate::contours::emission_grid;
use crate::error::{Error, Result};
use crate::families::PPoint;
use crate::numeric::{bisect, integrate_with_breaks, QuadOptions};
use crate::sequential::ALPHA_5SIGMA;
use crate::specfun::{erfcx, normal_cdf, normal_pdf, p_to_z, z_to_p};
use crate::Real;

/// Below this width/σ the prior averages switch to Taylor expansions, which
/// avoids dividing a cancelling difference by a tiny width.
const SMALL_WIDTH: Real = 1e-3;

/// Uniform density `1/width` on `(lower, lower + width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformPrior {
    pub lower: Real,
    pub width: Real,
}

impl UniformPrior {
    pub fn new(lower: Real, width: Real) -> Result<Self> {
        if !(width > 0.0 && width.is_finite() && lower.is_finite()) {
            return Err(Error::domain("UniformPrior", format!("need finite lower and width > 0, got ({lower}, {width})")));
        }
        Ok(UniformPrior { lower, width })
    }

    pub fn density(&self, mu: Real) -> Real {
        if mu > self.lower && mu <= self.lower + self.width {
            1.0 / self.width
        } else {
            0.0
        }
    }
}

/// Test setup. `epsilon = 0` is the point null.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JlConfig {
    pub mu0: Real,
    pub sigma: Real,
    pub tau: Real,
    #[serde(default)]
    pub epsilon: Real,
}

impl JlConfig {
    pub fn new(mu0: Real, sigma: Real, tau: Real, epsilon: Real) -> Result<Self> {
        let c = JlConfig { mu0, sigma, tau, epsilon };
        c.validate()?;
        Ok(c)
    }

    /// Point null with unit σ and `μ0 = 0`.
    pub fn standard(tau: Real) -> Result<Self> {
        Self::new(0.0, 1.0, tau, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.mu0.is_finite()
            && self.sigma > 0.0
            && self.sigma.is_finite()
            && self.tau > 0.0
            && self.tau.is_finite()
            && self.epsilon >= 0.0
            && self.epsilon.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::domain("JlConfig", format!("invalid parameters {self:?}")))
        }
    }

    pub fn h1_prior(&self) -> UniformPrior {
        UniformPrior {
            lower: self.mu0,
            width: self.tau,
        }
    }

    /// Prior on the interval null, absent for the point null.
    pub fn h0_prior(&self) -> Option<UniformPrior> {
        (self.epsilon > 0.0).then_some(UniformPrior {
            lower: self.mu0 - self.epsilon,
            width: self.epsilon,
        })
    }

    fn z(&self, t0: Real) -> Real {
        (t0 - self.mu0) / self.sigma
    }
}

/// `P(lo < Z < hi)` for a standard normal, taking each tail from the side
/// where it is small.
fn normal_mass(lo: Real, hi: Real) -> Real {
    if lo >= 0.0 {
        z_to_p(lo) - z_to_p(hi)
    } else if hi <= 0.0 {
        z_to_p(-hi) - z_to_p(-lo)
    } else {
        1.0 - z_to_p(-lo) - z_to_p(hi)
    }
}

/// `G(x) = xΦ(x) + φ(x)`, the antiderivative of `Φ`.
pub fn g_antiderivative(x: Real) -> Real {
    if x >= 0.0 {
        x * normal_cdf(x) + normal_pdf(x)
    } else {
        // φ(x) - |x|Q(|x|) with the common Gaussian factor pulled out
        let ax = -x;
        (-0.5 * x * x).exp() * (1.0 / (2.0 * std::f64::consts::PI).sqrt() - 0.5 * ax * erfcx(ax / std::f64::consts::SQRT_2))
    }
}

/// Average of `Φ` over `[x - h, x]`.
fn mean_cdf(x: Real, h: Real) -> Real {
    if h < SMALL_WIDTH {
        let (cdf, pdf) = (normal_cdf(x), normal_pdf(x));
        cdf - 0.5 * h * pdf - h * h * x * pdf / 6.0 - h * h * h * (x * x - 1.0) * pdf / 24.0
    } else {
        (g_antiderivative(x) - g_antiderivative(x - h)) / h
    }
}

/// Gaussian density at `x` averaged over a uniform mean on
/// `(lower, lower + width]`; `width = 0` is the plain Gaussian.
fn smeared_pdf(x: Real, lower: Real, width: Real, sigma: Real) -> Real {
    let h = width / sigma;
    if h == 0.0 {
        return normal_pdf((x - lower) / sigma) / sigma;
    }
    if h < SMALL_WIDTH {
        let c = (x - lower - 0.5 * width) / sigma;
        return normal_pdf(c) * (1.0 + h * h * (c * c - 1.0) / 24.0) / sigma;
    }
    normal_mass((x - lower - width) / sigma, (x - lower) / sigma) / width
}

/// Density of `X ~ N(μ, σ)` with `μ` uniform on `[μ0, μ0 + θ]`:
/// `(1/2θ)[erf((μ0+θ-x)/√2σ) - erf((μ0-x)/√2σ)]`, and the Gaussian at `μ0`
/// when `θ = 0`.
pub fn integrated_pdf(theta: Real, x: Real, mu0: Real, sigma: Real) -> Result<Real> {
    if !(sigma > 0.0) || !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::domain("integrated_pdf", format!("need sigma > 0 and theta >= 0, got ({sigma}, {theta})")));
    }
    Ok(smeared_pdf(x, mu0, theta, sigma))
}

/// Prior-averaged left tail `∫π1(μ) P(T ≤ t0 | μ) dμ`.
pub fn p1_prior_predictive(cfg: &JlConfig, t0: Real) -> Result<Real> {
    cfg.validate()?;
    Ok(mean_cdf(cfg.z(t0), cfg.tau / cfg.sigma))
}

/// The p0 definitions available for an interval null.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P0Variants {
    /// Right tail at `μ0`.
    pub simple: Real,
    /// Supremum of the right tail over the null interval.
    pub sup: Real,
    /// Right tail averaged over the uniform prior on the null interval.
    pub prior_predictive: Real,
}

pub fn p0_variants(cfg: &JlConfig, t0: Real) -> Result<P0Variants> {
    cfg.validate()?;
    let a = cfg.z(t0);
    let simple = z_to_p(a);
    // The right tail grows with μ, so the supremum sits at the upper end.
    let sup = simple;
    let prior_predictive = if cfg.epsilon == 0.0 {
        simple
    } else {
        mean_cdf(-a, cfg.epsilon / cfg.sigma)
    };
    Ok(P0Variants {
        simple,
        sup,
        prior_predictive,
    })
}

/// Which p0 a (p0, p1pp) point uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P0Kind {
    Simple,
    Sup,
    PriorPredictive,
}

impl P0Variants {
    pub fn get(&self, kind: P0Kind) -> Real {
        match kind {
            P0Kind::Simple => self.simple,
            P0Kind::Sup => self.sup,
            P0Kind::PriorPredictive => self.prior_predictive,
        }
    }
}

fn require_point_null(cfg: &JlConfig, func: &'static str) -> Result<()> {
    cfg.validate()?;
    if cfg.epsilon != 0.0 {
        return Err(Error::domain(func, format!("point null required, got epsilon = {}", cfg.epsilon)));
    }
    Ok(())
}

/// `B01 = L0 / ∫L1(μ)π1(μ)dμ` for the point null.
pub fn bayes_factor_point_null(cfg: &JlConfig, t0: Real) -> Result<Real> {
    require_point_null(cfg, "bayes_factor_point_null")?;
    let l0 = smeared_pdf(t0, cfg.mu0, 0.0, cfg.sigma);
    Ok(l0 / smeared_pdf(t0, cfg.mu0, cfg.tau, cfg.sigma))
}

/// The same Bayes factor as the prior-weighted harmonic mean of the simple
/// likelihood ratios `λ01(μ)`, integrated numerically.
pub fn bayes_factor_harmonic(cfg: &JlConfig, t0: Real) -> Result<Real> {
    require_point_null(cfg, "bayes_factor_harmonic")?;
    let (mu0, s, tau) = (cfg.mu0, cfg.sigma, cfg.tau);
    let a = cfg.z(t0);
    // 1/λ01(μ) = exp(a²/2) · exp(-(t0-μ)²/2σ²); the constant is applied in
    // log space after integrating.
    let kernel = |mu: Real| {
        let u = (t0 - mu) / s;
        (-0.5 * u * u).exp() / tau
    };
    let breaks: Vec<Real> = [-40.0, -10.0, -5.0, -1.0, 0.0, 1.0, 5.0, 10.0, 40.0]
        .iter()
        .map(|k| t0 + k * s)
        .collect();
    let opts = QuadOptions {
        rel_tol: 1e-13,
        ..QuadOptions::default()
    };
    let inner = integrate_with_breaks(kernel, mu0, mu0 + tau, &breaks, opts)?.value;
    if !(inner > 0.0) {
        return Err(Error::Degenerate(format!("harmonic-mean integral vanished at t0 = {t0}")));
    }
    Ok((-0.5 * a * a - inner.ln()).exp())
}

/// `B01` with prior averages in both numerator and denominator.
pub fn bayes_factor_interval_null(cfg: &JlConfig, t0: Real) -> Result<Real> {
    cfg.validate()?;
    let h0 = cfg
        .h0_prior()
        .ok_or_else(|| Error::domain("bayes_factor_interval_null", "epsilon > 0 required"))?;
    let num = smeared_pdf(t0, h0.lower, h0.width, cfg.sigma);
    Ok(num / smeared_pdf(t0, cfg.mu0, cfg.tau, cfg.sigma))
}

/// Point- or interval-null Bayes factor according to `cfg.epsilon`.
pub fn bayes_factor(cfg: &JlConfig, t0: Real) -> Result<Real> {
    if cfg.epsilon == 0.0 {
        bayes_factor_point_null(cfg, t0)
    } else {
        bayes_factor_interval_null(cfg, t0)
    }
}

/// `B01` divided by `L0 / max_{μ > μ0} L1(μ)`.
pub fn ockham_factor(cfg: &JlConfig, t0: Real) -> Result<Real> {
    require_point_null(cfg, "ockham_factor")?;
    let peak = if t0 > cfg.mu0 {
        normal_pdf(0.0) / cfg.sigma
    } else {
        // supremum approached as μ → μ0
        smeared_pdf(t0, cfg.mu0, 0.0, cfg.sigma)
    };
    Ok(peak / smeared_pdf(t0, cfg.mu0, cfg.tau, cfg.sigma))
}

/// Type-II rate of the simple test `θ = 0` against `θ = τ` on the
/// integrated pdf, rejecting `θ = 0` at level `alpha0`.
pub fn test2_type_ii_rate(cfg: &JlConfig, alpha0: Real) -> Result<Real> {
    let n_sigma = p_to_z(alpha0)?;
    p1_prior_predictive(cfg, cfg.mu0 + n_sigma * cfg.sigma)
}

/// Joint verdict of p-values and Bayes factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JlRegion {
    AgreeRejectH0,
    Paradox,
    NoDecision,
    AgreeRejectH1,
}

impl JlRegion {
    pub fn label(&self) -> &'static str {
        match self {
            JlRegion::AgreeRejectH0 => "agree-reject-H0",
            JlRegion::Paradox => "paradox",
            JlRegion::NoDecision => "no-decision",
            JlRegion::AgreeRejectH1 => "agree-reject-H1",
        }
    }
}

/// Thresholds for [`classify_jl_region`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JlThresholds {
    pub alpha0: Real,
    pub alpha1: Real,
}

impl Default for JlThresholds {
    fn default() -> Self {
        JlThresholds {
            alpha0: ALPHA_5SIGMA,
            alpha1: 0.05,
        }
    }
}

/// Kass-Raftery wording for the strength of a Bayes factor, applied to
/// whichever hypothesis it favors.
pub fn kass_raftery_label(b: Real) -> &'static str {
    let s = if b >= 1.0 { b } else { 1.0 / b };
    if s < 3.0 {
        "not worth more than a bare mention"
    } else if s < 20.0 {
        "positive"
    } else if s < 150.0 {
        "strong"
    } else {
        "very strong"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JlClassification {
    pub region: JlRegion,
    pub strength: &'static str,
}

/// Small p0 with `B01 > 1` is the paradox; small p0 with `B01 ≤ 1` agrees
/// on rejecting H0; otherwise small p1pp with `B01 > 1` agrees on
/// rejecting H1, and anything else is no decision.
pub fn classify_jl_region(p0: Real, p1pp: Real, b01: Real, th: &JlThresholds) -> Result<JlClassification> {
    if !((0.0..=1.0).contains(&p0) && (0.0..=1.0).contains(&p1pp) && b01 > 0.0) {
        return Err(Error::domain("classify_jl_region", format!("invalid inputs ({p0}, {p1pp}, {b01})")));
    }
    let region = if p0 <= th.alpha0 {
        if b01 > 1.0 {
            JlRegion::Paradox
        } else {
            JlRegion::AgreeRejectH0
        }
    } else if p1pp <= th.alpha1 && b01 > 1.0 {
        JlRegion::AgreeRejectH1
    } else {
        JlRegion::NoDecision
    };
    Ok(JlClassification {
        region,
        strength: kass_raftery_label(b01),
    })
}

/// The point `(p0, p1pp)` of an observation.
pub fn jl_point(cfg: &JlConfig, t0: Real, kind: P0Kind) -> Result<PPoint> {
    let p0 = p0_variants(cfg, t0)?.get(kind);
    Ok(PPoint::new(p0, p1_prior_predictive(cfg, t0)?))
}

/// Observations whose simple p0 runs over the emission grid.
pub fn observation_grid(mu0: Real, sigma: Real) -> Result<Vec<Real>> {
    emission_grid()
        .into_iter()
        .map(|p| Ok(mu0 + sigma * p_to_z(p)?))
        .collect()
}

/// Fixed-τ contour: `(p0, p1pp)` as the observation varies.
pub fn fixed_tau_contour(cfg: &JlConfig, kind: P0Kind) -> Result<Vec<PPoint>> {
    observation_grid(cfg.mu0, cfg.sigma)?
        .into_iter()
        .map(|t0| jl_point(cfg, t0, kind))
        .collect()
}

/// All prior widths τ at which the Bayes factor at `t0` equals `b01`, found
/// by a scan in `ln τ` over `[1e-3 σ, 1e12 σ]` and bisection to 1e-10.
pub fn taus_for_bayes_factor(base: &JlConfig, t0: Real, b01: Real) -> Result<Vec<Real>> {
    base.validate()?;
    if !(b01 > 0.0 && b01.is_finite()) {
        return Err(Error::domain("taus_for_bayes_factor", format!("B01 must be positive, got {b01}")));
    }
    let target = b01.ln();
    let f = |ln_tau: Real| -> Real {
        let cfg = JlConfig {
            tau: ln_tau.exp(),
            ..*base
        };
        match bayes_factor(&cfg, t0) {
            Ok(b) if b > 0.0 && b.is_finite() => b.ln() - target,
            _ => Real::NAN,
        }
    };
    let (lo, hi) = ((1e-3 * base.sigma).ln(), (1e12 * base.sigma).ln());
    const STEPS: usize = 600;
    let mut roots = Vec::new();
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..=STEPS {
        let x = lo + (hi - lo) * i as Real / STEPS as Real;
        let fx = f(x);
        if f_prev.is_finite() && fx.is_finite() && (f_prev < 0.0) != (fx < 0.0) {
            roots.push(bisect(f, x_prev, x, 1e-10)?.exp());
        }
        x_prev = x;
        f_prev = fx;
    }
    Ok(roots)
}

/// A point of a constant-B01 contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BayesContourPoint {
    pub t0: Real,
    pub tau: Real,
    pub p0: Real,
    pub p1pp: Real,
}

/// Constant-`B01` contour over the observations `t0s`. At each `t0` the
/// largest τ solving `B01(τ) = b01` is used; where no τ does, the point is
/// skipped.
pub fn bayes_contour(base: &JlConfig, b01: Real, t0s: &[Real], kind: P0Kind) -> Result<Vec<BayesContourPoint>> {
    let mut out = Vec::new();
    for &t0 in t0s {
        if let Some(&tau) = taus_for_bayes_factor(base, t0, b01)?.last() {
            let cfg = JlConfig { tau, ..*base };
            let p = jl_point(&cfg, t0, kind)?;
            out.push(BayesContourPoint {
                t0,
                tau,
                p0: p.p0,
                p1pp: p.p1,
            });
        }
    }
    Ok(out)
}

/// The `p0 = α0/√n` threshold with `τ/σ = √n`: one point on each fixed-τ
/// contour.
pub fn threshold_curve(base: &JlConfig, alpha0: Real, taus: &[Real]) -> Result<Vec<PPoint>> {
    taus.iter()
        .map(|&tau| {
            let cfg = JlConfig { tau, ..*base };
            cfg.validate()?;
            let p0 = alpha0 * cfg.sigma / tau;
            let t0 = cfg.mu0 + cfg.sigma * p_to_z(p0)?;
            Ok(PPoint::new(p0, p1_prior_predictive(&cfg, t0)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate;

    fn rel(a: Real, b: Real) -> Real {
        ((a - b) / b).abs()
    }

    #[test]
    fn antiderivative() {
        // G' = Φ checked by central differences
        for &x in &[-6.0, -2.0, -0.5, 0.0, 0.7, 3.0] {
            let h = 1e-5;
            let d = (g_antiderivative(x + h) - g_antiderivative(x - h)) / (2.0 * h);
            assert!((d - normal_cdf(x)).abs() < 1e-9, "x = {x}");
        }
        assert!((g_antiderivative(0.0) - normal_pdf(0.0)).abs() < 1e-16);
    }

    #[test]
    fn fig16_numbers() {
        let lr = normal_pdf(2.0) / integrated_pdf(100.0, 2.0, 0.0, 1.0).unwrap();
        assert!(rel(lr, 5.524786267898996) < 1e-12);
        assert!(rel(z_to_p(2.0), 0.022750131948179207) < 1e-14);
    }

    #[test]
    fn integrated_pdf_limits() {
        let peak = integrated_pdf(0.0, 0.0, 0.0, 1.0).unwrap();
        assert!((peak - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-16);
        let tiny = integrated_pdf(1e-9, 0.3, 0.0, 1.0).unwrap();
        assert!(rel(tiny, normal_pdf(0.3)) < 1e-9);
        // both sides of the Taylor switch agree
        let theta = 0.999e-3;
        let taylor = integrated_pdf(theta, 1.2, 0.0, 1.0).unwrap();
        assert!(rel(taylor, normal_mass(1.2 - theta, 1.2) / theta) < 1e-11);
        for theta in [1.0, 10.0, 100.0] {
            let f = |x: Real| integrated_pdf(theta, x, 0.0, 1.0).unwrap();
            let v = integrate_with_breaks(f, -50.0, theta + 50.0, &[0.0, theta], QuadOptions::default())
                .unwrap()
                .value;
            assert!((v - 1.0).abs() < 1e-9, "theta = {theta}");
        }
    }

    #[test]
    fn prior_predictive_p1() {
        let c = JlConfig::standard(100.0).unwrap();
        assert!(rel(p1_prior_predictive(&c, 2.0).unwrap(), 0.020084907026168296) < 1e-12);
        let narrow = JlConfig::standard(1e-12).unwrap();
        assert!((p1_prior_predictive(&narrow, 0.0).unwrap() - 0.5).abs() < 1e-12);
        let v = integrate(|x| integrated_pdf(100.0, x, 0.0, 1.0).unwrap(), Real::NEG_INFINITY, 2.0, QuadOptions::with_rel_tol(1e-12))
            .unwrap()
            .value;
        assert!(rel(v, 0.020084907026168296) < 1e-10);
    }

    #[test]
    fn five_sigma_thresholds() {
        let t0 = p_to_z(2.87e-7).unwrap();
        let cases = [
            (6.7e5, 0.99726957),
            (2.0e6, 2.97692408),
            (1.3e7, 19.35000654),
            (1.0e8, 148.84620417),
        ];
        for (tau, b) in cases {
            let c = JlConfig::standard(tau).unwrap();
            assert!(rel(bayes_factor_point_null(&c, t0).unwrap(), b) < 1e-7, "tau = {tau}");
        }
    }

    #[test]
    fn harmonic_identity() {
        for tau in [1.0, 10.0, 1e4] {
            let c = JlConfig::standard(tau).unwrap();
            for i in 0..20 {
                let t0 = -3.0 + 0.55 * i as Real;
                let a = bayes_factor_point_null(&c, t0).unwrap();
                let b = bayes_factor_harmonic(&c, t0).unwrap();
                assert!(rel(a, b) < 1e-9, "tau = {tau}, t0 = {t0}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn interval_null() {
        let c = JlConfig::new(0.0, 1.0, 1e4, 0.01).unwrap();
        assert!(rel(bayes_factor_interval_null(&c, 5.0).unwrap(), 0.014501398750461021) < 1e-9);
        let point = bayes_factor_point_null(&JlConfig::standard(1e4).unwrap(), 5.0).unwrap();
        assert!(rel(point, 0.014867199409049057) < 1e-10);
        let mut gap = Real::INFINITY;
        for eps in [1e-1, 1e-2, 1e-3, 1e-4, 1e-6] {
            let c = JlConfig::new(0.0, 1.0, 1e4, eps).unwrap();
            let g = rel(bayes_factor_interval_null(&c, 5.0).unwrap(), point);
            assert!(g < gap);
            gap = g;
        }
        assert!(gap < 1e-5);
        let sym = JlConfig::new(0.0, 1.0, 7.0, 7.0).unwrap();
        assert!((bayes_factor_interval_null(&sym, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(bayes_factor_interval_null(&JlConfig::standard(3.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn p0_definitions() {
        let c = JlConfig::new(0.0, 1.0, 10.0, 100.0).unwrap();
        let v = p0_variants(&c, 5.0).unwrap();
        assert!(rel(v.prior_predictive, 5.346165533832815e-10) < 1e-9);
        assert!(v.prior_predictive < v.simple);
        assert_eq!(v.sup, v.simple);
        let point = p0_variants(&JlConfig::standard(10.0).unwrap(), 1.3).unwrap();
        assert_eq!(point.simple, point.prior_predictive);
    }

    #[test]
    fn ockham() {
        let c = JlConfig::standard(1e4).unwrap();
        let o = ockham_factor(&c, 5.0).unwrap();
        assert!(rel(o, 3989.423947588972) < 1e-10);
        assert!(rel(o, 1e4 / (2.0 * std::f64::consts::PI).sqrt()) < 0.01);
        let n = p_to_z(ALPHA_5SIGMA).unwrap();
        let beta = test2_type_ii_rate(&c, ALPHA_5SIGMA).unwrap();
        assert!(rel(beta, n / 1e4) < 0.01);
    }

    #[test]
    fn regions() {
        let th = JlThresholds::default();
        let c = classify_jl_region(2.87e-7, 1e-3, 150.0, &th).unwrap();
        assert_eq!(c.region, JlRegion::Paradox);
        assert_eq!(c.strength, "very strong");
        assert_eq!(classify_jl_region(0.4, 0.5, 1.0, &th).unwrap().region, JlRegion::NoDecision);
        assert_eq!(classify_jl_region(0.6, 1e-3, 40.0, &th).unwrap().region, JlRegion::AgreeRejectH1);
        assert_eq!(classify_jl_region(1e-8, 0.3, 0.01, &th).unwrap().region, JlRegion::AgreeRejectH0);
        assert_eq!(kass_raftery_label(2.0), "not worth more than a bare mention");
        assert_eq!(kass_raftery_label(1.0 / 25.0), "strong");
    }

    #[test]
    fn contour_by_tau() {
        let base = JlConfig::standard(1.0).unwrap();
        let t0 = p_to_z(2.87e-7).unwrap();
        let taus = taus_for_bayes_factor(&base, t0, 20.0).unwrap();
        let tau = *taus.last().unwrap();
        assert!(rel(tau, 1.3e7) < 0.05);
        let check = bayes_factor_point_null(&JlConfig::standard(tau).unwrap(), t0).unwrap();
        assert!(rel(check, 20.0) < 1e-8);
        let pts = bayes_contour(&base, 3.0, &[2.0, 3.0, 4.0], P0Kind::Simple).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.windows(2).all(|w| w[1].tau > w[0].tau));
    }

    #[test]
    fn threshold_tracks_bayes_factor() {
        let base = JlConfig::standard(1.0).unwrap();
        let taus = [1e2, 1e3, 1e4];
        let curve = threshold_curve(&base, 0.01, &taus).unwrap();
        let bs: Vec<Real> = curve
            .iter()
            .zip(taus)
            .map(|(p, tau)| bayes_factor_point_null(&JlConfig::standard(tau).unwrap(), p_to_z(p.p0).unwrap()).unwrap())
            .collect();
        let (mx, mn) = bs.iter().fold((0.0_f64, Real::INFINITY), |(a, b), &v| (a.max(v), b.min(v)));
        assert!(mx / mn < 3.0, "{bs:?}");
    }
}
