mod support;

use pplane::contours::{fixed_contour, fixed_contour_p0};
use pplane::{ContourSpec, Observation, SimpleTest};
use proptest::prelude::*;
use support::props;

#[test]
fn p_sum_never_exceeds_one() {
    let worst = props::max_p_sum(10_000, 11);
    assert!(worst <= 1.0 + 4.0 * f64::EPSILON, "max p0+p1 = {worst}");
}

#[test]
fn p_values_uniform_under_truth() {
    let n = 10_000;
    for (i, (name, t)) in props::uniformity_tests().into_iter().enumerate() {
        let (d0, d1) = props::p_value_ks(&t, n, 100 + i as u64);
        let crit = props::ks_critical_1pct(n);
        assert!(d0 < crit && d1 < crit, "{name}: D0 = {d0}, D1 = {d1}, critical {crit}");
    }
}

#[test]
fn ks_distance_of_a_perfect_grid() {
    let mut u: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
    assert!((props::ks_uniform(&mut u) - 0.005).abs() < 1e-15);
}

#[test]
fn loglr_densities_related_by_exp_q() {
    assert!(props::loglr_identity_error() < 1e-10);
}

#[test]
fn contour_round_trip() {
    let e = props::involution_error();
    assert!(e < 1e-8, "{e}");
}

#[test]
fn plane_unchanged_by_transformation() {
    for (sep, mu_c, gamma) in [(1.0, 1.0, 1.0), (1.67, 0.0, 2.0), (3.33, -1.0, 0.5)] {
        let (dp, dl) = props::transformation_error(sep, mu_c, gamma);
        assert!(dp < 1e-8, "p-values differ by {dp}");
        assert!(dl < 1e-9, "likelihood ratios differ by {dl}");
    }
}

#[test]
fn transformed_pdf_normalised() {
    let m = props::transformed_pdf_mass(1.0, 1.0, 1.0);
    assert!((m - 1.0).abs() < 1e-8, "{m}");
}

#[test]
fn harmonic_mean_bayes_factor() {
    let e = props::harmonic_error();
    assert!(e < 1e-9, "{e}");
}

proptest! {
    #[test]
    fn gauss_sum_bound(sep in 0.01f64..8.0, x in -12.0f64..12.0, sigma in 0.1f64..10.0) {
        let t = SimpleTest::gauss(sigma, 1.0, 1.0 + sep * sigma).unwrap();
        let p = t.p_values(Observation::Continuous(1.0 + x * sigma)).unwrap();
        prop_assert!(p.p0 + p.p1 <= 1.0 + 4.0 * f64::EPSILON);
    }

    #[test]
    fn gauss_and_cauchy_contours_self_inverse(sep in 0.0f64..6.0, lp in -8.0f64..-0.01, cauchy: bool) {
        let p0 = 10f64.powf(lp);
        let spec = if cauchy { ContourSpec::Cauchy { sep } } else { ContourSpec::Gauss { sep } };
        if let Ok(p1) = fixed_contour(&spec, p0) {
            let back = fixed_contour(&spec, p1).unwrap();
            prop_assert!(((back - p0) / p0).abs() < 1e-8, "{} -> {} -> {}", p0, p1, back);
        }
    }

    #[test]
    fn gamma_contour_inverse(ratio in 1.05f64..30.0, n in 1u32..20, lp in -6.0f64..-0.05) {
        let p0 = 10f64.powf(lp);
        let spec = ContourSpec::Gamma { ratio, n };
        if let Ok(p1) = fixed_contour(&spec, p0) {
            let back = fixed_contour_p0(&spec, p1).unwrap();
            prop_assert!(((back - p0) / p0).abs() < 1e-8);
        }
    }

    #[test]
    fn contours_fall_with_p0(sep in 0.1f64..5.0, a in -6.0f64..-0.1, b in -6.0f64..-0.1) {
        prop_assume!((a - b).abs() > 1e-3);
        let spec = ContourSpec::Gauss { sep };
        let (lo, hi) = (10f64.powf(a.min(b)), 10f64.powf(a.max(b)));
        if let (Ok(p_lo), Ok(p_hi)) = (fixed_contour(&spec, lo), fixed_contour(&spec, hi)) {
            prop_assert!(p_lo >= p_hi);
        }
    }
}
