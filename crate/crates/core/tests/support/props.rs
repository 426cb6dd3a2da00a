//! Property checks shared by the core property tests and the acceptance target.
//! Each returns a worst-case figure; callers decide the tolerance.

#![allow(dead_code)]

use pplane::contours::{fixed_contour, fixed_contour_p0};
use pplane::families::{cauchy_sf, gauss_to_cauchy_transform, loglr_pdf, transformed_pdf};
use pplane::jlparadox::{bayes_factor_harmonic, bayes_factor_point_null, JlConfig};
use pplane::numeric::{integrate, QuadOptions};
use pplane::{ContourSpec, Hypothesis, HypothesisFamily, Observation, SimpleTest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random continuous test and an observation in its support.
pub fn random_case(rng: &mut ChaCha8Rng) -> (SimpleTest, Observation) {
    match rng.random_range(0..3) {
        0 | 1 => {
            let scale = rng.random_range(-2.0f64..2.0).exp();
            let mu0 = rng.random_range(-5.0..5.0);
            let d = scale * rng.random_range(0.01..6.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let fam = if rng.random_bool(0.5) {
                HypothesisFamily::Gauss { sigma: scale }
            } else {
                HypothesisFamily::Cauchy { gamma: scale }
            };
            let x = mu0 + scale * rng.random_range(-10.0..10.0);
            (SimpleTest::new(fam, mu0, mu0 + d).unwrap(), Observation::Continuous(x))
        }
        _ => {
            let n = rng.random_range(1..=20);
            let mu0 = rng.random_range(-2.0f64..2.0).exp();
            let mu1 = mu0 * rng.random_range(0.01f64..3.0).exp();
            let t = rng.random_range(-3.0f64..3.0).exp() * n as f64 / mu0;
            (SimpleTest::gamma(n, mu0, mu1).unwrap(), Observation::Continuous(t))
        }
    }
}

/// Largest `p0 + p1` seen over `cases` random continuous tests.
pub fn max_p_sum(cases: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cases)
        .map(|_| {
            let (t, obs) = random_case(&mut rng);
            let p = t.p_values(obs).unwrap();
            p.p0 + p.p1
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Kolmogorov-Smirnov distance of `u` from the uniform distribution.
pub fn ks_uniform(u: &mut [f64]) -> f64 {
    u.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = u.len() as f64;
    u.iter()
        .enumerate()
        .map(|(i, &v)| (v - i as f64 / n).max((i + 1) as f64 / n - v))
        .fold(0.0, f64::max)
}

/// Critical KS distance at the 1% level for large samples.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

pub fn uniformity_tests() -> Vec<(&'static str, SimpleTest)> {
    vec![
        ("gauss", SimpleTest::gauss(1.0, 0.0, 1.5).unwrap()),
        ("cauchy", SimpleTest::cauchy(2.0, 0.0, 3.0).unwrap()),
        ("gamma", SimpleTest::gamma(3, 1.0, 2.5).unwrap()),
    ]
}

/// KS distances of p0 under H0 and of p1 under H1.
pub fn p_value_ks(test: &SimpleTest, draws: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut under = |h: Hypothesis| {
        let mut ps: Vec<f64> = (0..draws)
            .map(|_| {
                let p = test.p_values(test.sample(h, &mut rng)).unwrap();
                if h == Hypothesis::H0 { p.p0 } else { p.p1 }
            })
            .collect();
        ks_uniform(&mut ps)
    };
    let d0 = under(Hypothesis::H0);
    let d1 = under(Hypothesis::H1);
    (d0, d1)
}

/// Worst relative deviation from `h0(q) = e^q h1(q)` on a q grid.
pub fn loglr_identity_error() -> f64 {
    let mut worst: f64 = 0.0;
    for sep in [0.1, 0.5, 1.0, 1.67, 3.33, 5.0] {
        let t = SimpleTest::gauss(1.0, 0.0, sep).unwrap();
        for i in 0..=400 {
            let q = -20.0 + 0.1 * i as f64;
            let h0 = loglr_pdf(&t, Hypothesis::H0, q).unwrap();
            let h1 = loglr_pdf(&t, Hypothesis::H1, q).unwrap();
            if h0 > 1e-280 {
                worst = worst.max(((q.exp() * h1 - h0) / h0).abs());
            }
        }
    }
    worst
}

fn p_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=60).map(|i| 10f64.powf(-6.0 + 0.1 * i as f64)).collect();
    g.extend([0.5, 0.8, 0.9, 0.95, 0.99]);
    g
}

/// Worst relative error of mapping p0 onto the contour and back.
pub fn involution_error() -> f64 {
    let specs = [
        ContourSpec::Gauss { sep: 1.67 },
        ContourSpec::Gauss { sep: 3.33 },
        ContourSpec::Cauchy { sep: 1.67 },
        ContourSpec::Cauchy { sep: 10.0 },
        ContourSpec::Gamma { ratio: 3.0, n: 1 },
        ContourSpec::Gamma { ratio: 10.0, n: 4 },
    ];
    let mut worst: f64 = 0.0;
    for spec in specs {
        for p0 in p_grid() {
            let Ok(p1) = fixed_contour(&spec, p0) else { continue };
            let back = fixed_contour_p0(&spec, p1).unwrap();
            worst = worst.max(((back - p0) / p0).abs());
        }
    }
    worst
}

/// Compares Gauss p-values of `x` with p-values computed after mapping `x`
/// onto a Cauchy-like variate, where H1's density is the transformed pdf.
/// Returns the worst relative differences of the contour coordinates and of
/// the likelihood ratio.
pub fn transformation_error(sep: f64, mu_c: f64, gamma: f64) -> (f64, f64) {
    let t = SimpleTest::gauss(1.0, 0.0, sep).unwrap();
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, max_intervals: 4000 };
    let (mut dp, mut dl): (f64, f64) = (0.0, 0.0);
    for i in 0..=24 {
        let x = -3.0 + 0.25 * i as f64;
        let obs = Observation::Continuous(x);
        let p = t.p_values(obs).unwrap();
        let y = gauss_to_cauchy_transform(x, 0.0, 1.0, mu_c, gamma);
        let p0y = cauchy_sf((y - mu_c) / gamma);
        let p1y = integrate(|v| transformed_pdf(v, mu_c, gamma, sep), f64::NEG_INFINITY, y, opts).unwrap().value;
        dp = dp.max(((p0y - p.p0) / p.p0).abs()).max(((p1y - p.p1) / p.p1).abs());

        let u = (y - mu_c) / gamma;
        let cauchy = 1.0 / (std::f64::consts::PI * gamma * (1.0 + u * u));
        let lr_y = cauchy / transformed_pdf(y, mu_c, gamma, sep);
        let lr_x = t.likelihood_ratio(obs).unwrap();
        dl = dl.max(((lr_y - lr_x) / lr_x).abs());
    }
    (dp, dl)
}

/// Normalisation of the transformed density.
pub fn transformed_pdf_mass(mu_c: f64, gamma: f64, sep: f64) -> f64 {
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-12, max_intervals: 4000 };
    let f = |v| transformed_pdf(v, mu_c, gamma, sep);
    integrate(f, f64::NEG_INFINITY, mu_c, opts).unwrap().value + integrate(f, mu_c, f64::INFINITY, opts).unwrap().value
}

/// Worst relative gap between the closed-form Bayes factor and its
/// harmonic-mean form.
pub fn harmonic_error() -> f64 {
    let mut worst: f64 = 0.0;
    for tau in [0.5, 1.0, 10.0, 100.0, 1e4, 1e6] {
        let cfg = JlConfig::standard(tau).unwrap();
        for t0 in [-1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0] {
            let a = bayes_factor_point_null(&cfg, t0).unwrap();
            let b = bayes_factor_harmonic(&cfg, t0).unwrap();
            worst = worst.max(((a - b) / a).abs());
        }
    }
    worst
}
