//! Probabilities of misleading evidence: the chance that the likelihood
//! ratio favors the false hypothesis by at least a factor `k`.
//!
//! These are planning quantities, fixed before data are taken.

use serde::{Deserialize, Serialize};

use crate::contours::{fixed_lr_intersections, ContourSpec};
use crate::error::{Error, Result};
use crate::families::{Observation, SimpleTest};
use crate::specfun::{p_to_z, z_to_p};
use crate::Real;

/// Benchmark likelihood ratio labelled "fairly strong" evidence.
pub const FAIRLY_STRONG: Real = 8.0;
/// Benchmark likelihood ratio labelled "strong" evidence.
pub const STRONG: Real = 32.0;

fn check_k(k: Real) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::domain("misleading evidence", format!("k must be positive, got {k}")));
    }
    Ok(())
}

fn gauss_tail(s: Real, k: Real) -> Result<Real> {
    if s == 0.0 {
        return Err(Error::Degenerate("λ01 = 1 identically at zero separation".into()));
    }
    // ln λ01 is normal with mean ∓s²/2 and width s
    Ok(z_to_p(k.ln() / s + 0.5 * s))
}

/// `P(L0/L1 > k | H1)`.
///
/// Closed form for Gauss; other continuous families use the p1 coordinate
/// of the unique crossing of the fixed contour with the `λ01 = k` contour.
pub fn prob_misleading_for_h0(spec: &ContourSpec, k: Real) -> Result<Real> {
    check_k(k)?;
    match *spec {
        ContourSpec::Gauss { sep } => gauss_tail(sep, k),
        _ => Ok(single_crossing(spec, k)?.1),
    }
}

/// `P(L0/L1 < 1/k | H0)`.
pub fn prob_misleading_for_h1(spec: &ContourSpec, k: Real) -> Result<Real> {
    check_k(k)?;
    match *spec {
        ContourSpec::Gauss { sep } => gauss_tail(sep, k),
        _ => Ok(single_crossing(spec, 1.0 / k)?.0),
    }
}

fn single_crossing(spec: &ContourSpec, lambda01: Real) -> Result<(Real, Real)> {
    let xs = fixed_lr_intersections(spec, lambda01)?;
    match xs.as_slice() {
        [p] => Ok((p.p0, p.p1)),
        [] => Err(Error::NoSolution(format!("fixed contour never reaches λ01 = {lambda01}"))),
        _ => Err(Error::Degenerate(format!(
            "λ01 = {lambda01} is crossed {} times; the misleading region is not a tail",
            xs.len()
        ))),
    }
}

/// Gauss separation at which the probability of misleading evidence for
/// benchmark `k > 1` is largest: `√(2 ln k)`.
pub fn max_misleading_separation(k: Real) -> Result<Real> {
    if !(k > 1.0 && k.is_finite()) {
        return Err(Error::domain("max_misleading_separation", format!("k > 1 required, got {k}")));
    }
    Ok((2.0 * k.ln()).sqrt())
}

/// One line of the misleading-evidence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisleadingRow {
    pub separation: Real,
    pub k: Real,
    /// `P(L0/L1 < 1/k | H0)`
    pub for_h1_under_h0: Real,
    /// `P(L0/L1 > k | H1)`
    pub for_h0_under_h1: Real,
}

/// Gauss table over the given separations and benchmarks.
pub fn misleading_table(separations: &[Real], ks: &[Real]) -> Result<Vec<MisleadingRow>> {
    let mut rows = Vec::new();
    for &s in separations {
        let spec = ContourSpec::Gauss { sep: s };
        for &k in ks {
            rows.push(MisleadingRow {
                separation: s,
                k,
                for_h1_under_h0: prob_misleading_for_h1(&spec, k)?,
                for_h0_under_h1: prob_misleading_for_h0(&spec, k)?,
            });
        }
    }
    Ok(rows)
}

/// Both p-values of one observation, their one-sided Gaussian equivalents,
/// and the likelihood ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvidenceSummary {
    pub p0: Real,
    pub z0: Real,
    pub p1: Real,
    pub z1: Real,
    pub lambda01: Real,
}

pub fn evidence_summary(test: &SimpleTest, obs: Observation) -> Result<EvidenceSummary> {
    let p = test.p_values(obs)?;
    Ok(EvidenceSummary {
        p0: p.p0,
        z0: p_to_z(p.p0)?,
        p1: p.p1,
        z1: p_to_z(p.p1)?,
        lambda01: test.likelihood_ratio(obs)?,
    })
}
