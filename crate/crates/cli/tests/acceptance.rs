//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any check fails that is not listed in `KNOWN_GAPS`.

#[path = "../../core/tests/support/props.rs"]
mod props;

use std::time::{Duration, Instant};

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pplane::contours::asimov_medians;
use pplane::double_test::{outcome_table, simulate_outcomes, DoubleTestRates, Sampling};
use pplane::evidence::{evidence_summary, prob_misleading_for_h0, prob_misleading_for_h1};
use pplane::jlparadox::{bayes_factor, integrated_pdf, JlConfig};
use pplane::limits::verify_bayes_cls_equality;
use pplane::numeric::{integrate, QuadOptions};
use pplane::sequential::{run_batch, Schedule, WalkConfig};
use pplane::specfun::p_to_z;
use pplane::{ContourSpec, Hypothesis, Observation, SimpleTest};
use pplane_cli::output::CURVE_HEADER;
use pplane_cli::{execute, Cli};

/// Checks that cannot pass with a correct implementation. The reference
/// prints 2.2e-16 for this tail, which is the double-precision epsilon; the
/// exact left tail P(n <= 30 | 100) is 1.99e-16.
const KNOWN_GAPS: &[&str] = &["second example p1"];

struct Check {
    what: String,
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Report {
    checks: Vec<Check>,
}

impl Report {
    fn check(&mut self, what: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { what: what.into(), ok, detail: detail.into() });
    }

    fn near(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        self.check(what, (got - want).abs() <= tol, format!("{got:.6e} vs {want:e} ± {tol:e}"));
    }

    fn near_rel(&mut self, what: &str, got: f64, want: f64, rel: f64) {
        self.check(what, ((got - want) / want).abs() <= rel, format!("{got:.6e} vs {want:e} ± {}%", rel * 100.0));
    }

    fn within(&mut self, what: &str, took: Duration, limit: Duration) {
        self.check(what, took < limit, format!("{:.3} s, limit {} s", took.as_secs_f64(), limit.as_secs_f64()));
    }
}

fn poisson_examples(r: &mut Report) {
    let start = Instant::now();
    let a = evidence_summary(&SimpleTest::poisson(1.0, 10.0).unwrap(), Observation::Count(10)).unwrap();
    let b = evidence_summary(&SimpleTest::poisson(10.0, 100.0).unwrap(), Observation::Count(30)).unwrap();
    let took = start.elapsed();
    r.near("first example p0", a.p0, 1.1e-7, 2e-9);
    r.near("first example p1", a.p1, 0.58, 0.01);
    r.near_rel("first example L0/L1", a.lambda01, 8e-7, 0.05);
    r.near("first example z0", a.z0, 5.2, 0.05);
    r.near("second example p0", b.p0, 2.5e-7, 5e-9);
    r.near_rel("second example p1", b.p1, 2.2e-16, 0.05);
    r.near_rel("second example L0/L1", b.lambda01, 1.2e9, 0.05);
    r.near("second example z0", b.z0, 5.0, 0.05);
    r.near("second example z1", b.z1, 8.1, 0.05);
    r.within("runtime", took, Duration::from_secs(1));
}

fn asimov(r: &mut Report) {
    for (sep, want, tol) in [(1.67, 4.7e-2, 1e-3), (3.33, 4.3e-4, 2e-5)] {
        let m = asimov_medians(&ContourSpec::Gauss { sep }).unwrap();
        r.near(&format!("median p1 at {sep}"), m.median_p1_under_h0, want, tol);
        r.check(
            format!("median CLs = 2 median p1 at {sep}"),
            m.median_cls_under_h0 == 2.0 * m.median_p1_under_h0,
            format!("{:e} vs {:e}", m.median_cls_under_h0, m.median_p1_under_h0),
        );
    }
}

fn misleading(r: &mut Report) {
    let start = Instant::now();
    for (sep, k8, k32) in [(1.67, 0.019, 0.0018), (3.33, 0.011, 0.0034)] {
        let spec = ContourSpec::Gauss { sep };
        for (k, want) in [(8.0, k8), (32.0, k32)] {
            r.near_rel(&format!("P(L0/L1 < 1/{k} | H0) at {sep}"), prob_misleading_for_h1(&spec, k).unwrap(), want, 0.05);
            r.near_rel(&format!("P(L0/L1 > {k} | H1) at {sep}"), prob_misleading_for_h0(&spec, k).unwrap(), want, 0.05);
        }
    }
    r.within("runtime", start.elapsed(), Duration::from_secs(1));
}

fn jl_thresholds(r: &mut Report) {
    let t0 = p_to_z(2.87e-7).unwrap();
    for (tau, b01) in [(6.7e5, 1.0), (2.0e6, 3.0), (1.3e7, 20.0), (1.0e8, 150.0)] {
        let b = bayes_factor(&JlConfig::standard(tau).unwrap(), t0).unwrap();
        r.near_rel(&format!("B01 at tau/sigma = {tau:e}"), b, b01, 0.10);
    }
}

fn integrated_pdf_numbers(r: &mut Report) {
    let opts = QuadOptions::with_rel_tol(1e-12);
    let p = integrate(|x| integrated_pdf(0.0, x, 0.0, 1.0).unwrap(), 2.0, f64::INFINITY, opts).unwrap().value;
    r.near("p-value under theta = 0 (percent)", 100.0 * p, 2.3, 0.1);
    let lr = integrated_pdf(0.0, 2.0, 0.0, 1.0).unwrap() / integrated_pdf(100.0, 2.0, 0.0, 1.0).unwrap();
    r.near("LR of theta = 0 to theta = 100", lr, 5.5, 0.1);
}

fn bayes_cls(r: &mut Report) {
    let start = Instant::now();
    for (family, obs) in pplane_cli::verify_grids() {
        let rep = verify_bayes_cls_equality(family, 0.0, &obs, &pplane_cli::VERIFY_GAMMAS).unwrap();
        let worst = rep.rows.iter().map(|row| row.max_abs_diff / row.cls_ul.abs()).fold(0.0, f64::max);
        r.check(
            format!("{} grid ({} cases)", rep.family, rep.rows.len()),
            worst <= 1e-6,
            format!("max relative gap {worst:.2e}"),
        );
    }
    r.within("runtime", start.elapsed(), Duration::from_secs(10));
}

fn outcome_algebra(r: &mut Report) {
    const DRAWS: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let tuples: Vec<(f64, f64, f64)> = (0..100)
        .map(|_| (rng.random_range(0.0..5.0), 10f64.powf(rng.random_range(-3.0..-0.5)), 10f64.powf(rng.random_range(-3.0..-0.5))))
        .collect();
    // Per tuple: column-sum gap, cells outside 3 SE, worst deviation in SE.
    let per_tuple: Vec<(f64, usize, f64)> = tuples
        .par_iter()
        .enumerate()
        .map(|(i, &(sep, alpha0, alpha1))| {
            let rates = DoubleTestRates::from_contour(&ContourSpec::Gauss { sep }, alpha0, alpha1).unwrap();
            let table = outcome_table(&rates);
            let (s0, s1) = table.column_sums();
            let gap = (s0 - 1.0).abs().max((s1 - 1.0).abs());
            let test = SimpleTest::gauss(1.0, 0.0, sep).unwrap();
            let (mut bad, mut worst) = (0, 0.0f64);
            for (h, col) in [(Hypothesis::H0, 0), (Hypothesis::H1, 1)] {
                let mut sim_rng = ChaCha8Rng::seed_from_u64(i as u64);
                sim_rng.set_stream(col);
                let counts = simulate_outcomes(&test, alpha0, alpha1, h, DRAWS, Sampling::Stratified, &mut sim_rng).unwrap();
                for (row, &c) in table.rows.iter().zip(&counts) {
                    let p = if col == 0 { row.prob_h0 } else { row.prob_h1 };
                    let se = (p * (1.0 - p) / DRAWS as f64).sqrt();
                    let dev = (c as f64 / DRAWS as f64 - p).abs();
                    if dev > 3.0 * se {
                        bad += 1;
                    } else if se > 0.0 {
                        worst = worst.max(dev / se);
                    }
                }
            }
            (gap, bad, worst)
        })
        .collect();
    let sum_gap = per_tuple.iter().map(|t| t.0).fold(0.0, f64::max);
    let bad: usize = per_tuple.iter().map(|t| t.1).sum();
    let worst_se = per_tuple.iter().map(|t| t.2).fold(0.0, f64::max);
    r.check("column sums", sum_gap <= 1e-12, format!("max |sum - 1| = {sum_gap:.1e}"));
    r.check("Monte Carlo within 3 SE", bad == 0, format!("{bad} of 800 cells outside, worst {worst_se:.2} SE"));
}

fn property_suite(r: &mut Report) {
    let worst = props::max_p_sum(10_000, 11);
    r.check("p0 + p1 <= 1", worst <= 1.0 + 4.0 * f64::EPSILON, format!("max {worst:.17}"));
    let n = 10_000;
    let crit = props::ks_critical_1pct(n);
    for (i, (name, t)) in props::uniformity_tests().into_iter().enumerate() {
        let (d0, d1) = props::p_value_ks(&t, n, 100 + i as u64);
        r.check(format!("{name} p-value uniformity"), d0 < crit && d1 < crit, format!("D = {d0:.4}, {d1:.4}, critical {crit:.4}"));
    }
    let e = props::loglr_identity_error();
    r.check("h0(q) = e^q h1(q)", e < 1e-10, format!("{e:.1e}"));
    let e = props::involution_error();
    r.check("contour involution", e < 1e-8, format!("{e:.1e}"));
    let (dp, dl) = props::transformation_error(1.0, 1.0, 1.0);
    r.check("transformation invariance", dp < 1e-8 && dl < 1e-8, format!("p {dp:.1e}, LR {dl:.1e}"));
    let m = props::transformed_pdf_mass(1.0, 1.0, 1.0);
    r.check("transformed pdf mass", (m - 1.0).abs() < 1e-8, format!("{m:.12}"));
    let e = props::harmonic_error();
    r.check("harmonic-mean Bayes factor", e < 1e-9, format!("{e:.1e}"));
}

fn sequential(r: &mut Report) {
    let start = Instant::now();
    let horizons = [100u64, 1_000, 10_000];
    let fractions = |schedule: Schedule| -> Vec<f64> {
        let cfg = WalkConfig::new(Hypothesis::H0, 0.0, 0.25, 1.0, 10_000, 77, schedule).unwrap();
        let batch = run_batch(&cfg, 10_000).unwrap();
        horizons.iter().map(|&n| batch.summary_at(n).unwrap().stop_fraction).collect()
    };
    let alpha0 = 0.05;
    let c = fractions(Schedule::Constant { alpha0 });
    let s = fractions(Schedule::SqrtN { alpha0 });
    r.check(
        "constant schedule exceeds alpha0 and grows",
        c[0] > alpha0 && c[0] < c[1] && c[1] < c[2],
        format!("{:.4} {:.4} {:.4}", c[0], c[1], c[2]),
    );
    // Cumulative fractions cannot fall; bounded means the gain per decade of
    // n_max does not grow.
    let (g1, g2) = (s[1] - s[0], s[2] - s[1]);
    r.check(
        "sqrt(n) schedule levels off",
        g2 <= g1 && s[2] < c[0],
        format!("{:.4} {:.4} {:.4}", s[0], s[1], s[2]),
    );
    r.within("runtime", start.elapsed(), Duration::from_secs(60));
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let mut argv = vec!["pplane"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
    execute(&cli).map(|(body, _)| body).map_err(|e| e.to_string())
}

fn schema_problem(csv: &str, json: &str, header: &[&str]) -> Option<String> {
    let mut lines = csv.lines();
    if lines.next() != Some(header.join(",").as_str()) {
        return Some("unexpected header".into());
    }
    let mut rows = 0;
    for line in lines {
        rows += 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Some(format!("row {rows} has {} fields", fields.len()));
        }
        let numeric = if header == CURVE_HEADER { &fields[2..] } else { &fields[..] };
        if let Some(f) = numeric.iter().find(|f| f.parse::<f64>().is_err()) {
            return Some(format!("row {rows}: {f:?} is not a number"));
        }
    }
    if rows == 0 {
        return Some("no rows".into());
    }
    let parsed: serde_json::Value = match serde_json::from_str(json) {
        Ok(v) => v,
        Err(e) => return Some(format!("json: {e}")),
    };
    let arr = parsed.as_array()?;
    if arr.len() != rows {
        return Some("json and csv row counts differ".into());
    }
    let keys_ok = arr.iter().all(|o| o.as_object().is_some_and(|m| m.keys().map(String::as_str).eq(header.iter().copied())));
    (!keys_ok).then(|| "json keys differ from header".into())
}

fn presets(r: &mut Report) {
    let mut cases: Vec<(&str, &str, bool)> = vec![("regions", "fig2", false)];
    for f in ["fig3a", "fig3b", "fig3c", "fig3d", "fig4"] {
        cases.push(("contour", f, false));
    }
    for f in ["fig6a", "fig6b", "fig6c", "fig6d", "fig7", "fig8", "fig9", "fig10"] {
        cases.push(("lr-contour", f, false));
    }
    cases.push(("misleading", "fig11", false));
    for f in ["fig12a", "fig12b", "fig12c", "fig12d"] {
        cases.push(("walk", f, true));
    }
    cases.push(("lil", "fig13", true));
    for f in ["fig14", "fig15", "fig16"] {
        cases.push(("jl", f, false));
    }
    let misleading_header = ["separation", "k", "p_misleading_h1_under_h0", "p_misleading_h0_under_h1"];
    let mut problems = Vec::new();
    let mut fig3a = String::new();
    for (cmd, fig, seeded) in &cases {
        let mut args = vec![*cmd, "--figure", fig];
        if *seeded {
            args.extend(["--seed", "7"]);
        }
        let first = run_cli(&args);
        let second = run_cli(&args);
        let json = run_cli(&[args.as_slice(), &["--format", "json"]].concat());
        match (first, second, json) {
            (Ok(a), Ok(b), Ok(j)) => {
                if a != b {
                    problems.push(format!("{fig}: output differs between runs"));
                }
                let header: &[&str] = if *cmd == "misleading" { &misleading_header } else { &CURVE_HEADER };
                if let Some(p) = schema_problem(&a, &j, header) {
                    problems.push(format!("{fig}: {p}"));
                }
                if *fig == "fig3a" {
                    fig3a = a;
                }
            }
            (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => problems.push(format!("{fig}: {e}")),
        }
    }
    r.check(
        format!("{} presets deterministic and well-formed", cases.len()),
        problems.is_empty(),
        problems.join("; "),
    );
    for (series, want, tol) in [("sep=1.67 median|H0", 4.7e-2, 1e-3), ("sep=3.33 median|H0", 4.3e-4, 2e-5)] {
        let y = fig3a
            .lines()
            .find(|l| l.starts_with(&format!("{series},")))
            .and_then(|l| l.rsplit(',').next())
            .and_then(|v| v.parse::<f64>().ok())
            .unwrap_or(f64::NAN);
        r.near(&format!("fig3a {series}"), y, want, tol);
    }
}

fn main() {
    type Criterion = (&'static str, fn(&mut Report));
    let criteria: [Criterion; 10] = [
        ("Poisson discovery examples", poisson_examples),
        ("Asimov medians", asimov),
        ("misleading-evidence probabilities", misleading),
        ("Jeffreys-Lindley thresholds", jl_thresholds),
        ("integrated pdf at x = 2", integrated_pdf_numbers),
        ("CLs equals flat-prior Bayes limits", bayes_cls),
        ("double-test outcome algebra", outcome_algebra),
        ("property suite", property_suite),
        ("sequential stopping", sequential),
        ("figure presets", presets),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut rep = Report::default();
        let start = Instant::now();
        run(&mut rep);
        let took = start.elapsed().as_secs_f64();
        let failed: Vec<&Check> = rep.checks.iter().filter(|c| !c.ok).collect();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} {:>2} {name} [{} checks, {took:.2} s]", i + 1, rep.checks.len());
        let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
        for c in rep.checks.iter().filter(|c| verbose && c.ok) {
            println!("       ok {}: {}", c.what, c.detail);
        }
        for c in &failed {
            let known = KNOWN_GAPS.contains(&c.what.as_str());
            println!("       {}: {}{}", c.what, c.detail, if known { " (known gap)" } else { "" });
            if !known {
                unexpected += 1;
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
