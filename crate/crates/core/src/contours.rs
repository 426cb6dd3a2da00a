//! Curves in the (p0, p1) plane.
//!
//! A fixed-hypothesis contour holds both hypotheses fixed and lets the
//! observation vary. A likelihood-ratio contour holds `λ01 = L0/L1` fixed
//! and lets the hypotheses vary. Gauss and Cauchy contours depend only on
//! the standardized separation, Gamma contours on the rate ratio and the
//! sample size, and Poisson contours on both means, which makes them
//! discrete point sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{cauchy_isf, cauchy_sf, HypothesisFamily, Observation, PPoint, SimpleTest};
use crate::numeric::bisect;
use crate::specfun::{
    p_to_z, poisson_left_tail, poisson_right_tail, reg_gamma_p_inv, reg_gamma_pq, reg_gamma_q_inv,
    z_to_p,
};
use crate::Real;

/// Parameters that determine a contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ContourSpec {
    /// `sep = |μ1 - μ0| / σ`
    Gauss { sep: Real },
    /// `sep = |μ1 - μ0| / γ`
    Cauchy { sep: Real },
    /// `ratio = μ1 / μ0` of decay rates, with `n` measured decay times.
    Gamma { ratio: Real, n: u32 },
    Poisson { mu0: Real, mu1: Real },
}

impl ContourSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ContourSpec::Gauss { sep } | ContourSpec::Cauchy { sep } => sep >= 0.0 && sep.is_finite(),
            ContourSpec::Gamma { ratio, n } => ratio > 0.0 && ratio.is_finite() && n >= 1,
            ContourSpec::Poisson { mu0, mu1 } => {
                mu0 > 0.0 && mu1 > 0.0 && mu0.is_finite() && mu1.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain("ContourSpec", format!("invalid parameters {self:?}")))
        }
    }

    /// A representative test with these contours (unit scale, `μ0 = 0` or
    /// `μ0 = 1` as appropriate).
    pub fn test(&self) -> Result<SimpleTest> {
        self.validate()?;
        match *self {
            ContourSpec::Gauss { sep } => SimpleTest::gauss(1.0, 0.0, sep),
            ContourSpec::Cauchy { sep } => SimpleTest::cauchy(1.0, 0.0, sep),
            ContourSpec::Gamma { ratio, n } => SimpleTest::gamma(n, 1.0, ratio),
            ContourSpec::Poisson { mu0, mu1 } => SimpleTest::poisson(mu0, mu1),
        }
    }

    /// The contour spec of a given test.
    pub fn from_test(test: &SimpleTest) -> Self {
        match test.family() {
            HypothesisFamily::Gauss { .. } => ContourSpec::Gauss { sep: test.separation() },
            HypothesisFamily::Cauchy { .. } => ContourSpec::Cauchy { sep: test.separation() },
            HypothesisFamily::Gamma { n } => ContourSpec::Gamma {
                ratio: test.mu1() / test.mu0(),
                n,
            },
            HypothesisFamily::Poisson => ContourSpec::Poisson {
                mu0: test.mu0(),
                mu1: test.mu1(),
            },
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            ContourSpec::Gauss { .. } => "gauss",
            ContourSpec::Cauchy { .. } => "cauchy",
            ContourSpec::Gamma { .. } => "gamma",
            ContourSpec::Poisson { .. } => "poisson",
        }
    }

    fn reject_poisson(&self, what: &str) -> Result<()> {
        if let ContourSpec::Poisson { .. } = self {
            return Err(Error::FamilyMismatch(format!(
                "poisson {what} is a discrete point set; use the poisson point functions"
            )));
        }
        Ok(())
    }
}

fn check_p(func: &'static str, p: Real) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(func, format!("0 < p < 1 required, got {p}")));
    }
    Ok(())
}

fn nonzero(func: &str, p: Real) -> Result<Real> {
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(Error::NoSolution(format!("{func}: contour value {p} is not representable in (0, 1)")))
    }
}

/// p1 on the fixed-hypothesis contour at `p0`.
pub fn fixed_contour(spec: &ContourSpec, p0: Real) -> Result<Real> {
    spec.validate()?;
    spec.reject_poisson("fixed contour")?;
    check_p("fixed_contour", p0)?;
    let p1 = match *spec {
        ContourSpec::Gauss { sep } => {
            if sep == 0.0 {
                1.0 - p0
            } else {
                z_to_p(sep - p_to_z(p0)?)
            }
        }
        ContourSpec::Cauchy { sep } => {
            if sep == 0.0 {
                1.0 - p0
            } else {
                cauchy_sf(sep - cauchy_isf(p0))
            }
        }
        ContourSpec::Gamma { .. } => {
            let test = spec.test()?;
            let t = test.observation_for_p0(p0)?;
            test.p_values(Observation::Continuous(t))?.p1
        }
        ContourSpec::Poisson { .. } => unreachable!(),
    };
    nonzero("fixed_contour", p1)
}

/// p0 on the fixed-hypothesis contour at `p1` (the inverse of
/// [`fixed_contour`]).
pub fn fixed_contour_p0(spec: &ContourSpec, p1: Real) -> Result<Real> {
    spec.validate()?;
    spec.reject_poisson("fixed contour")?;
    check_p("fixed_contour_p0", p1)?;
    match *spec {
        // symmetric under p0 <-> p1
        ContourSpec::Gauss { .. } | ContourSpec::Cauchy { .. } => fixed_contour(spec, p1),
        ContourSpec::Gamma { ratio, n } => {
            let swapped = ContourSpec::Gamma { ratio: 1.0 / ratio, n };
            fixed_contour(&swapped, p1)
        }
        ContourSpec::Poisson { .. } => unreachable!(),
    }
}

/// Fixed-contour points of a Poisson test, one per observed count in
/// `counts`. Both tails include the observed count.
pub fn poisson_fixed_points(mu0: Real, mu1: Real, counts: std::ops::RangeInclusive<u64>) -> Result<Vec<(u64, PPoint)>> {
    let test = SimpleTest::poisson(mu0, mu1)?;
    counts
        .map(|k| Ok((k, test.p_values(Observation::Count(k))?)))
        .collect()
}

/// Every p1 in (0, 1) at which the `λ01` contour crosses the vertical line
/// through `p0`, in increasing order.
///
/// A point counts only if some non-negative separation produces it, which
/// is what removes the spurious branch of the squared contour equation.
pub fn lr_contour_branches(spec: &ContourSpec, lambda01: Real, p0: Real) -> Result<Vec<Real>> {
    spec.validate()?;
    spec.reject_poisson("likelihood-ratio contour")?;
    check_p("lr_contour", p0)?;
    if !(lambda01 > 0.0 && lambda01.is_finite()) {
        return Err(Error::domain("lr_contour", format!("λ01 must be positive, got {lambda01}")));
    }
    let ln_l = lambda01.ln();
    let mut out = Vec::with_capacity(2);
    match *spec {
        ContourSpec::Gauss { .. } => {
            // z1² - z0² = 2 ln λ01 with separation z0 + z1 >= 0
            let z0 = p_to_z(p0)?;
            let d = z0 * z0 + 2.0 * ln_l;
            if d >= 0.0 {
                let r = d.sqrt();
                for w in [r, -r] {
                    if z0 + w >= 0.0 {
                        out.push(z_to_p(w));
                    }
                }
            }
        }
        ContourSpec::Cauchy { .. } => {
            // (1 + v1²) = λ01 (1 + u0²) with separation u0 + v1 >= 0
            let u0 = cauchy_isf(p0);
            let d = lambda01 * u0.mul_add(u0, 1.0) - 1.0;
            if d >= 0.0 {
                let r = d.sqrt();
                for w in [r, -r] {
                    if u0 + w >= 0.0 {
                        out.push(cauchy_sf(w));
                    }
                }
            }
        }
        ContourSpec::Gamma { ratio, n } => {
            out = gamma_lr_branches(n, ratio >= 1.0, ln_l, p0)?;
        }
        ContourSpec::Poisson { .. } => unreachable!(),
    }
    out.retain(|&p| p > 0.0 && p < 1.0);
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite p-values"));
    out.dedup();
    Ok(out)
}

/// p1 on the `λ01` contour at `p0`, taking the branch nearest the p1 = 0
/// axis when the contour crosses twice.
pub fn lr_contour(spec: &ContourSpec, lambda01: Real, p0: Real) -> Result<Real> {
    lr_contour_branches(spec, lambda01, p0)?
        .first()
        .copied()
        .ok_or_else(|| Error::NoSolution(format!("λ01 = {lambda01} is not attained at p0 = {p0}")))
}

// Gamma in scaled variables x_i = μ_i t: ln λ01 = n ln(x0/x1) + x1 - x0.
// With rising rates (μ1 > μ0) we need x1 >= x0, p0 = P(n, x0), p1 = Q(n, x1);
// otherwise x1 <= x0 with the tails exchanged.
fn gamma_lr_branches(n: u32, rising: bool, ln_l: Real, p0: Real) -> Result<Vec<Real>> {
    let nf = n as Real;
    let x0 = if rising { reg_gamma_p_inv(nf, p0)? } else { reg_gamma_q_inv(nf, p0)? };
    let g = |ln_x1: Real| {
        let x1 = ln_x1.exp();
        nf * (x0.ln() - ln_x1) + x1 - x0 - ln_l
    };
    let (lo, hi) = if rising {
        (x0.ln(), (x0.max(nf) * 4.0 + 50.0 + ln_l.abs() * 4.0).ln())
    } else {
        (x0.min(nf).ln() - (x0 + ln_l.abs() + 10.0) / nf - 1.0, x0.ln())
    };
    // Split at the stationary point x1 = n so each piece is monotone.
    let mut edges = vec![lo];
    if nf.ln() > lo && nf.ln() < hi {
        edges.push(nf.ln());
    }
    edges.push(hi);
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ga, gb) = (g(a), g(b));
        if ga == 0.0 {
            out.push(a);
            continue;
        }
        if ga.signum() != gb.signum() {
            out.push(bisect(g, a, b, 1e-14)?);
        }
    }
    if let Some(&last) = edges.last() {
        if g(last) == 0.0 {
            out.push(last);
        }
    }
    let mut ps = Vec::new();
    for ln_x1 in out {
        let (p, q) = reg_gamma_pq(nf, ln_x1.exp())?;
        ps.push(if rising { q } else { p });
    }
    Ok(ps)
}

/// A point of a Poisson likelihood-ratio contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonLrPoint {
    pub count: u64,
    pub mu1: Real,
    pub p0: Real,
    pub p1: Real,
}

/// Points of the `λ01` contour for Poisson tests with fixed `mu0` and
/// `mu1 > mu0`: for each count the values of `mu1` giving that likelihood
/// ratio are found by bisection (tolerance 1e-10 in `mu1`).
pub fn poisson_lr_points(mu0: Real, lambda01: Real, counts: std::ops::RangeInclusive<u64>) -> Result<Vec<PoissonLrPoint>> {
    if !(mu0 > 0.0 && mu0.is_finite()) {
        return Err(Error::domain("poisson_lr_points", format!("mu0 must be positive, got {mu0}")));
    }
    if !(lambda01 > 0.0 && lambda01.is_finite()) {
        return Err(Error::domain("poisson_lr_points", format!("λ01 must be positive, got {lambda01}")));
    }
    let ln_l = lambda01.ln();
    let mut pts = Vec::new();
    for k in counts {
        let kf = k as Real;
        // ln λ01(μ1) = k ln(μ0/μ1) + μ1 - μ0, stationary at μ1 = k
        let g = |mu1: Real| kf * (mu0 / mu1).ln() + mu1 - mu0 - ln_l;
        let top = mu0.max(kf) * 2.0 + 10.0 + 2.0 * ln_l.abs();
        let mut edges = vec![mu0];
        if kf > mu0 {
            edges.push(kf);
        }
        edges.push(top);
        let p0 = poisson_right_tail(mu0, k)?;
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (ga, gb) = (g(a), g(b));
            if ga.signum() == gb.signum() || ga == 0.0 {
                continue;
            }
            let mu1 = bisect(g, a, b, 1e-10)?;
            pts.push(PoissonLrPoint {
                count: k,
                mu1,
                p0,
                p1: poisson_left_tail(mu1, k)?,
            });
        }
    }
    Ok(pts)
}

/// Points where the fixed-hypothesis contour of `spec` crosses the `λ01`
/// contour, found by scanning the observation and bisecting sign changes.
pub fn fixed_lr_intersections(spec: &ContourSpec, lambda01: Real) -> Result<Vec<PPoint>> {
    spec.reject_poisson("fixed contour")?;
    let test = spec.test()?;
    let ln_l = lambda01.ln();
    let g = |logit: Real| -> Real {
        let p0 = 1.0 / (1.0 + (-logit).exp());
        match test.observation_for_p0(p0) {
            Ok(t) => test
                .ln_likelihood_ratio(Observation::Continuous(t))
                .map(|v| v - ln_l)
                .unwrap_or(Real::NAN),
            Err(_) => Real::NAN,
        }
    };
    let grid: Vec<Real> = (0..=2000).map(|i| -36.0 + 72.0 * i as Real / 2000.0).collect();
    let mut out = Vec::new();
    let mut prev = (grid[0], g(grid[0]));
    for &x in &grid[1..] {
        let gx = g(x);
        if prev.1.is_finite() && gx.is_finite() && prev.1.signum() != gx.signum() {
            let root = bisect(g, prev.0, x, 1e-13)?;
            let p0 = 1.0 / (1.0 + (-root).exp());
            let t = test.observation_for_p0(p0)?;
            out.push(test.p_values(Observation::Continuous(t))?);
        }
        prev = (x, gx);
    }
    Ok(out)
}

/// `CLs = p1 / (1 - p0)`.
pub fn cls(p: PPoint) -> Result<Real> {
    if !(p.p0 < 1.0) {
        return Err(Error::Degenerate(format!("CLs undefined at p0 = {}", p.p0)));
    }
    Ok(p.p1 / (1.0 - p.p0))
}

/// How H1 is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExclusionRule {
    /// Exclude H1 when `p1 <= α1`.
    P1Cut,
    /// Exclude H1 when `CLs <= α1`.
    ClsCut,
}

/// Outcome of the double test at a point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Discovery,
    Exclusion,
    NoDecision,
    DoubleRejection,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::Discovery => "discovery",
            Region::Exclusion => "exclusion",
            Region::NoDecision => "no-decision",
            Region::DoubleRejection => "double-rejection",
        }
    }
}

/// Classifies `p` by the H0 cut `alpha0` and the H1 exclusion rule at `alpha1`.
pub fn classify_region(p: PPoint, alpha0: Real, alpha1: Real, rule: ExclusionRule) -> Region {
    let excluded = match rule {
        ExclusionRule::P1Cut => p.p1 <= alpha1,
        // At p0 = 1 CLs is undefined; only p1 = 0 can exclude there.
        ExclusionRule::ClsCut => cls(p).map(|c| c <= alpha1).unwrap_or(p.p1 == 0.0),
    };
    match (p.p0 <= alpha0, excluded) {
        (true, true) => Region::DoubleRejection,
        (true, false) => Region::Discovery,
        (false, true) => Region::Exclusion,
        (false, false) => Region::NoDecision,
    }
}

/// Gauss separation whose fixed contour passes through `(alpha0, alpha1)`.
pub fn punzi_separation(alpha0: Real, alpha1: Real) -> Result<Real> {
    for a in [alpha0, alpha1] {
        if !(a > 0.0 && a <= 0.5) {
            return Err(Error::domain("punzi_separation", format!("0 < α <= 1/2 required, got {a}")));
        }
    }
    Ok(p_to_z(alpha0)? + p_to_z(alpha1)?)
}

/// Median p-values from the Asimov data set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsimovMedians {
    pub median_p1_under_h0: Real,
    pub median_p0_under_h1: Real,
    pub median_cls_under_h0: Real,
}

/// Medians of p1 and CLs under H0 and of p0 under H1.
///
/// For continuous families the median observation under H0 has `p0 = 1/2`,
/// so the median CLs is exactly twice the median p1. Poisson uses the
/// median count of each hypothesis instead.
pub fn asimov_medians(spec: &ContourSpec) -> Result<AsimovMedians> {
    if let ContourSpec::Poisson { mu0, mu1 } = *spec {
        spec.validate()?;
        let test = SimpleTest::poisson(mu0, mu1)?;
        let at_h0 = test.p_values(Observation::Count(poisson_median(mu0)?))?;
        let at_h1 = test.p_values(Observation::Count(poisson_median(mu1)?))?;
        return Ok(AsimovMedians {
            median_p1_under_h0: at_h0.p1,
            median_p0_under_h1: at_h1.p0,
            median_cls_under_h0: cls(at_h0)?,
        });
    }
    let p1 = fixed_contour(spec, 0.5)?;
    Ok(AsimovMedians {
        median_p1_under_h0: p1,
        median_p0_under_h1: fixed_contour_p0(spec, 0.5)?,
        median_cls_under_h0: cls(PPoint::new(0.5, p1))?,
    })
}

/// Smallest count whose cumulative probability reaches 1/2.
pub fn poisson_median(mu: Real) -> Result<u64> {
    let mut k = (mu + 1.0 / 3.0 - 0.02 / mu.max(1e-3)).floor().max(0.0) as u64;
    while k > 0 && poisson_left_tail(mu, k - 1)? >= 0.5 {
        k -= 1;
    }
    while poisson_left_tail(mu, k)? < 0.5 {
        k += 1;
    }
    Ok(k)
}

/// Plotting grid in p0: 512 log-spaced points on `[1e-16, 1 - 1e-6]`
/// together with their reflections `1 - p`, sorted and strictly inside (0, 1).
pub fn emission_grid() -> Vec<Real> {
    const N: usize = 512;
    let lo = -16.0_f64;
    let hi = (1.0 - 1e-6_f64).log10();
    let mut g: Vec<Real> = (0..N)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as Real / (N - 1) as Real))
        .collect();
    let reflected: Vec<Real> = g.iter().map(|&p| 1.0 - p).collect();
    g.extend(reflected);
    g.retain(|&p| p > 0.0 && p < 1.0);
    g.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    g.dedup();
    g
}

/// The fixed contour sampled on [`emission_grid`], skipping points whose
/// p1 is not representable.
pub fn fixed_contour_polyline(spec: &ContourSpec) -> Result<Vec<PPoint>> {
    let mut out = Vec::new();
    for p0 in emission_grid() {
        match fixed_contour(spec, p0) {
            Ok(p1) => out.push(PPoint::new(p0, p1)),
            Err(Error::NoSolution(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// The `λ01` contour sampled on [`emission_grid`], split into its lower
/// (index 0) and upper (index 1) branches.
pub fn lr_contour_polylines(spec: &ContourSpec, lambda01: Real) -> Result<[Vec<PPoint>; 2]> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for p0 in emission_grid() {
        let b = lr_contour_branches(spec, lambda01, p0)?;
        match b.as_slice() {
            [] => {}
            [only] => lower.push(PPoint::new(p0, *only)),
            [a, c, ..] => {
                lower.push(PPoint::new(p0, *a));
                upper.push(PPoint::new(p0, *c));
            }
        }
    }
    Ok([lower, upper])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_medians() {
        let g0 = ContourSpec::Gauss { sep: 0.0 };
        assert!((fixed_contour(&g0, 0.3).unwrap() - 0.7).abs() < 1e-15);
        let m = fixed_contour(&ContourSpec::Gauss { sep: 1.67 }, 0.5).unwrap();
        assert!((m - 0.047459681802947324).abs() < 1e-15);
        let m = fixed_contour(&ContourSpec::Gauss { sep: 3.33 }, 0.5).unwrap();
        assert!(((m - 4.342299203816555e-4) / m).abs() < 1e-12);
    }

    #[test]
    fn exponential_contour() {
        let e = ContourSpec::Gamma { ratio: 2.0, n: 1 };
        assert!((fixed_contour(&e, 0.5).unwrap() - 0.25).abs() < 1e-14);
        // inverse via the swapped spec
        assert!((fixed_contour_p0(&e, 0.25).unwrap() - 0.5).abs() < 1e-13);
    }

    #[test]
    fn lr_examples() {
        let g = ContourSpec::Gauss { sep: 1.0 };
        let p1 = lr_contour(&g, std::f64::consts::E, 0.5).unwrap();
        assert!((p1 - 0.07864960352514257).abs() < 1e-15);
        let both = lr_contour_branches(&g, 1.0, 0.3).unwrap();
        assert_eq!(both.len(), 2);
        assert!((both[0] - 0.3).abs() < 1e-14 && (both[1] - 0.7).abs() < 1e-14);
        let c = ContourSpec::Cauchy { sep: 1.0 };
        assert!((lr_contour(&c, 1.0, 0.2).unwrap() - 0.2).abs() < 1e-14);
        // λ01 < 1 is unattainable near p0 = 1/2
        assert!(matches!(lr_contour(&g, 0.5, 0.5), Err(Error::NoSolution(_))));
    }

    #[test]
    fn gamma_lr_unit_ratio_has_both_diagonals() {
        let s = ContourSpec::Gamma { ratio: 2.0, n: 4 };
        let b = lr_contour_branches(&s, 1.0, 0.2).unwrap();
        assert_eq!(b.len(), 2, "{b:?}");
        assert!((b[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn cls_values() {
        assert_eq!(cls(PPoint::new(0.0, 0.05)).unwrap(), 0.05);
        assert_eq!(cls(PPoint::new(0.5, 0.031)).unwrap(), 0.062);
        assert!(cls(PPoint::new(1.0, 0.2)).is_err());
    }

    #[test]
    fn regions() {
        use ExclusionRule::*;
        assert_eq!(classify_region(PPoint::new(0.5, 0.5), 0.05, 0.1, P1Cut), Region::NoDecision);
        assert_eq!(classify_region(PPoint::new(0.01, 0.05), 0.05, 0.1, P1Cut), Region::DoubleRejection);
        assert_eq!(classify_region(PPoint::new(0.5, 0.08), 0.05, 0.1, P1Cut), Region::Exclusion);
        assert_eq!(classify_region(PPoint::new(0.5, 0.08), 0.05, 0.1, ClsCut), Region::NoDecision);
        assert_eq!(classify_region(PPoint::new(0.01, 0.5), 0.05, 0.1, ClsCut), Region::Discovery);
    }

    #[test]
    fn punzi() {
        assert_eq!(punzi_separation(0.5, 0.5).unwrap(), 0.0);
        assert!((punzi_separation(0.05, 0.1).unwrap() - 2.926405192496073).abs() < 1e-12);
        assert!((punzi_separation(2.87e-7, 0.05).unwrap() - 6.644619403794027).abs() < 1e-11);
        assert!(punzi_separation(0.0, 0.1).is_err());
        assert!(punzi_separation(0.05, 0.7).is_err());
    }

    #[test]
    fn asimov() {
        let m = asimov_medians(&ContourSpec::Gauss { sep: 0.0 }).unwrap();
        assert_eq!(m.median_p1_under_h0, 0.5);
        assert_eq!(m.median_p0_under_h1, 0.5);
        assert_eq!(m.median_cls_under_h0, 1.0);
        let m = asimov_medians(&ContourSpec::Gauss { sep: 1.67 }).unwrap();
        assert_eq!(m.median_p1_under_h0, m.median_p0_under_h1);
        assert_eq!(m.median_cls_under_h0, 2.0 * m.median_p1_under_h0);
    }

    #[test]
    fn poisson_median_matches_cdf() {
        for &mu in &[0.1, 0.7, 1.0, 3.3, 10.0, 99.5] {
            let k = poisson_median(mu).unwrap();
            assert!(poisson_left_tail(mu, k).unwrap() >= 0.5);
            if k > 0 {
                assert!(poisson_left_tail(mu, k - 1).unwrap() < 0.5);
            }
        }
    }

    #[test]
    fn grid_shape() {
        let g = emission_grid();
        assert!(g.len() > 990, "{}", g.len());
        assert!(g[0] == 1e-16 || (g[0] - 1e-16).abs() < 1e-30);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(*g.last().unwrap() < 1.0);
    }

    #[test]
    fn poisson_points_line_up() {
        let pts = poisson_lr_points(10.0, 0.1, 0..=40).unwrap();
        assert!(!pts.is_empty());
        let test_lr = |p: &PoissonLrPoint| {
            SimpleTest::poisson(10.0, p.mu1)
                .unwrap()
                .likelihood_ratio(Observation::Count(p.count))
                .unwrap()
        };
        for p in &pts {
            assert!((test_lr(p) - 0.1).abs() < 1e-8);
            assert_eq!(p.p0, poisson_right_tail(10.0, p.count).unwrap());
        }
    }

    #[test]
    fn poisson_rejected_by_continuous_routines() {
        let s = ContourSpec::Poisson { mu0: 1.0, mu1: 3.0 };
        assert!(matches!(fixed_contour(&s, 0.5), Err(Error::FamilyMismatch(_))));
        assert!(matches!(lr_contour(&s, 2.0, 0.5), Err(Error::FamilyMismatch(_))));
    }
}
