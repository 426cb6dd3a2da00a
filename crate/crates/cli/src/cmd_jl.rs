use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use pplane::contours::{fixed_contour, lr_contour_polylines};
use pplane::evidence::evidence_summary;
use pplane::jlparadox::{
    bayes_contour, bayes_factor, classify_jl_region, fixed_tau_contour, integrated_pdf, p0_variants,
    p1_prior_predictive, threshold_curve, JlConfig, JlThresholds, P0Kind,
};
use pplane::{ContourSpec, Observation, SimpleTest};

use crate::config::resolve;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Curves, PlotSpec, Table};
use crate::{unknown_figure, Ctx, Produced};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Simple,
    Sup,
    #[value(name = "pp")]
    #[serde(rename = "pp")]
    PriorPredictive,
}

impl From<Kind> for P0Kind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Simple => P0Kind::Simple,
            Kind::Sup => P0Kind::Sup,
            Kind::PriorPredictive => P0Kind::PriorPredictive,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct JlArgs {
    #[arg(long)]
    pub figure: Option<String>,
    /// Print the two Poisson discovery examples.
    #[arg(long)]
    pub discovery: bool,
    /// Prior widths τ/σ under H1.
    #[arg(long, value_delimiter = ',')]
    pub tau: Vec<f64>,
    /// Width ε/σ of an interval null (0 for the point null).
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu0: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Observations to tabulate instead of drawing contours.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    /// Constant Bayes factor contours.
    #[arg(long, value_delimiter = ',')]
    pub b01: Vec<f64>,
    /// Which p0 to use on an interval null.
    #[arg(long, value_enum)]
    pub p0_kind: Option<Kind>,
    /// Discovery threshold; draws p0 = alpha0 and p0 = alpha0/√n.
    #[arg(long)]
    pub alpha0: Option<f64>,
    /// Draw the integrated pdf for these θ instead.
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<f64>,
    /// Draw the fixed-p0 line through growing separations at this p0.
    #[arg(long)]
    pub insight_p0: Option<f64>,
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JlParams {
    figure: Option<String>,
    discovery: bool,
    tau: Vec<f64>,
    epsilon: f64,
    mu0: f64,
    sigma: f64,
    x: Vec<f64>,
    b01: Vec<f64>,
    p0_kind: Kind,
    alpha0: Option<f64>,
    theta: Vec<f64>,
    insight_p0: Option<f64>,
    log: bool,
}

fn decades(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|e| 10f64.powi(e)).collect()
}

fn jl_preset(fig: Option<&str>) -> CliResult<JlParams> {
    let base = JlParams {
        figure: fig.map(str::to_owned),
        discovery: false,
        tau: vec![1.0, 10.0, 100.0, 1000.0],
        epsilon: 0.0,
        mu0: 0.0,
        sigma: 1.0,
        x: vec![],
        b01: vec![],
        p0_kind: Kind::Simple,
        alpha0: None,
        theta: vec![],
        insight_p0: None,
        log: false,
    };
    let log_base = || JlParams {
        tau: decades(0, 8),
        b01: vec![1.0, 3.0, 20.0, 150.0],
        log: true,
        ..jl_preset(None).expect("default preset")
    };
    let eps = |sub: &str| match sub {
        "a" => Some(0.01),
        "b" => Some(1.0),
        "c" => Some(100.0),
        "d" => Some(1e4),
        _ => None,
    };
    let p = match fig {
        None => base,
        Some("fig14") => JlParams {
            tau: vec![1.0, 3.0, 10.0, 30.0, 100.0],
            b01: vec![1.0 / 3.0, 1.0, 3.0],
            ..base
        },
        Some("fig15") => JlParams { alpha0: Some(0.01), ..log_base() },
        Some("fig16") => JlParams { theta: vec![0.0, 3.0, 10.0, 100.0], ..base },
        Some("fig17") => JlParams { insight_p0: Some(0.05), ..base },
        Some(id) if id.len() == 6 && (id.starts_with("fig18") || id.starts_with("fig19")) => {
            let epsilon = eps(&id[5..]).ok_or_else(|| unknown_figure("jl", id))?;
            let p0_kind = if id.starts_with("fig18") { Kind::PriorPredictive } else { Kind::Sup };
            JlParams { epsilon, p0_kind, ..log_base() }
        }
        Some(id) => return Err(unknown_figure("jl", id)),
    };
    Ok(JlParams { figure: fig.map(str::to_owned), ..p })
}

fn discovery_examples() -> CliResult<Table> {
    let mut t = Table::new(&["mu0", "mu1", "n", "p0", "z0", "p1", "z1", "lambda01"]);
    for (mu0, mu1, n) in [(1.0, 10.0, 10u64), (10.0, 100.0, 30)] {
        let s = evidence_summary(&SimpleTest::poisson(mu0, mu1)?, Observation::Count(n))?;
        t.push(vec![
            Cell::Num(mu0),
            Cell::Num(mu1),
            Cell::Int(n),
            Cell::Num(s.p0),
            Cell::Num(s.z0),
            Cell::Num(s.p1),
            Cell::Num(s.z1),
            Cell::Num(s.lambda01),
        ]);
    }
    Ok(t)
}

fn config(p: &JlParams, tau_over_sigma: f64) -> CliResult<JlConfig> {
    Ok(JlConfig::new(p.mu0, p.sigma, tau_over_sigma * p.sigma, p.epsilon * p.sigma)?)
}

pub fn jl(args: &JlArgs, ctx: &Ctx) -> CliResult<Produced> {
    let r = resolve("jl", &ctx.config, args, jl_preset)?;
    let p = r.params;
    let done = |table| Ok(Produced { table, parameters: r.value.clone(), seeds: vec![] });
    if p.discovery {
        return done(discovery_examples()?);
    }
    let kind: P0Kind = p.p0_kind.into();

    if !p.x.is_empty() {
        let th = JlThresholds {
            alpha0: p.alpha0.unwrap_or(JlThresholds::default().alpha0),
            ..JlThresholds::default()
        };
        let mut t = Table::new(&[
            "x", "tau_over_sigma", "epsilon_over_sigma", "p0_simple", "p0_sup", "p0_pp", "p1pp", "b01", "region", "strength",
        ]);
        for &x in &p.x {
            for &tau in &p.tau {
                let cfg = config(&p, tau)?;
                let v = p0_variants(&cfg, x)?;
                let p1pp = p1_prior_predictive(&cfg, x)?;
                let b = bayes_factor(&cfg, x)?;
                let cl = classify_jl_region(v.get(kind), p1pp, b, &th)?;
                t.push(vec![
                    Cell::Num(x),
                    Cell::Num(tau),
                    Cell::Num(p.epsilon),
                    Cell::Num(v.simple),
                    Cell::Num(v.sup),
                    Cell::Num(v.prior_predictive),
                    Cell::Num(p1pp),
                    Cell::Num(b),
                    Cell::text(cl.region.label()),
                    Cell::text(cl.strength),
                ]);
            }
        }
        return done(t);
    }

    let title = p.figure.clone().unwrap_or_else(|| "p0 against prior-predictive p1".into());
    let mut c = Curves::default();

    if !p.theta.is_empty() {
        let xs: Vec<f64> = (0..=480).map(|i| p.mu0 + p.sigma * (-4.0 + 0.05 * i as f64)).collect();
        for &th in &p.theta {
            let ys = xs
                .iter()
                .map(|&x| Ok((x, integrated_pdf(th * p.sigma, x, p.mu0, p.sigma)?)))
                .collect::<CliResult<Vec<_>>>()?;
            c.push(&format!("theta={th}"), "pdf", ys);
        }
        // The observation x = 2σ under the smallest and largest θ.
        let x_obs = p.mu0 + 2.0 * p.sigma;
        for th in [p.theta[0], p.theta[p.theta.len() - 1]] {
            c.push(&format!("x=2 theta={th}"), "marker", [(x_obs, integrated_pdf(th * p.sigma, x_obs, p.mu0, p.sigma)?)]);
        }
        let plot = PlotSpec {
            title,
            x_label: "x".into(),
            y_label: "density".into(),
            x_log: false,
            y_log: false,
            x_range: None,
            y_range: None,
        };
        return done(c.into_table(plot));
    }

    if let Some(p0) = p.insight_p0 {
        for l in [0.37, 0.83, 1.0, 1.2, 2.7] {
            let [lower, upper] = lr_contour_polylines(&ContourSpec::Gauss { sep: 1.0 }, l)?;
            c.push(&format!("lambda={l}/lower"), "lr", lower.iter().map(|q| (q.p0, q.p1)));
            c.push(&format!("lambda={l}/upper"), "lr", upper.iter().map(|q| (q.p0, q.p1)));
        }
        let line = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&s| Ok((p0, fixed_contour(&ContourSpec::Gauss { sep: s }, p0)?)))
            .collect::<CliResult<Vec<_>>>()?;
        c.push("bcde", "line", line.iter().copied());
        for (label, pt) in ["b", "c", "d", "e"].iter().zip(&line) {
            c.push(label, "marker", [*pt]);
        }
        return done(c.into_table(PlotSpec::plane(title, false)));
    }

    if p.tau.is_empty() {
        return Err(CliError::Usage("no prior widths requested".into()));
    }
    for &tau in &p.tau {
        let cfg = config(&p, tau)?;
        let v = fixed_tau_contour(&cfg, kind)?;
        c.push(&format!("tau/sigma={tau}"), "fixed", v.iter().map(|q| (q.p0, q.p1)));
    }
    let t0s: Vec<f64> = (0..=200).map(|i| p.mu0 + p.sigma * (-1.0 + 0.05 * i as f64)).collect();
    let base = config(&p, 1.0)?;
    for &b in &p.b01 {
        let v = bayes_contour(&base, b, &t0s, kind)?;
        c.push(&format!("B01={b}"), "bayes", v.iter().map(|q| (q.p0, q.p1pp)));
    }
    if let Some(a0) = p.alpha0 {
        c.push(&format!("p0={a0}"), "threshold", [(a0, 1e-300), (a0, 1.0)]);
        let top = p.tau.iter().copied().fold(1.0, f64::max);
        let taus: Vec<f64> = (0..=80).map(|i| top.powf(i as f64 / 80.0)).collect();
        let v = threshold_curve(&base, a0, &taus)?;
        c.push(&format!("p0={a0}/sqrt(n)"), "threshold", v.iter().map(|q| (q.p0, q.p1)));
    }
    done(c.into_table(PlotSpec::plane(title, p.log)))
}
