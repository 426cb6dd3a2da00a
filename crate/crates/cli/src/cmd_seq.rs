use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use pplane::contours::{fixed_contour, fixed_contour_polyline, lr_contour_polylines};
use pplane::sequential::{
    alpha_lil, lil_boundary_points, lil_is_degenerate, run_batch, run_walk, run_walk_full, Schedule, WalkConfig,
    WalkTrace,
};
use pplane::{ContourSpec, Hypothesis};

use crate::config::resolve;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Curves, PlotSpec, Table};
use crate::{unknown_figure, Ctx, Produced};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    H0,
    H1,
}

impl From<Truth> for Hypothesis {
    fn from(t: Truth) -> Self {
        match t {
            Truth::H0 => Hypothesis::H0,
            Truth::H1 => Hypothesis::H1,
        }
    }
}

fn parse_schedule(s: &str) -> CliResult<Schedule> {
    s.parse::<Schedule>().map_err(|e| CliError::Usage(format!("--schedule {s:?}: {e}")))
}

fn walk_curve(c: &mut Curves, name: &str, trace: &WalkTrace) {
    c.push(name, "walk", trace.records.iter().map(|r| (r.p0, r.p1)));
    if let Some(r) = trace.records.iter().find(|r| r.stopped) {
        c.push(&format!("{name} stop"), "marker", [(r.p0, r.p1)]);
    }
}

#[derive(Debug, Args, Serialize)]
pub struct WalkArgs {
    #[arg(long)]
    pub figure: Option<String>,
    #[arg(long, value_enum)]
    pub truth: Option<Truth>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu1: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Largest number of events.
    #[arg(long)]
    pub nmax: Option<u64>,
    /// Stopping rule as kind:value, e.g. constant:0.05, sqrt_n:0.05,
    /// lr:0.125 or cls:0.05. Batches accept several.
    #[arg(long, value_delimiter = ',')]
    pub schedule: Vec<String>,
    /// Random stream within the seed for a single walk.
    #[arg(long)]
    pub stream: Option<u64>,
    /// Run this many walks and summarize their stopping times.
    #[arg(long)]
    pub walks: Option<u64>,
    /// Batch horizons to summarize at (default: nmax).
    #[arg(long, value_delimiter = ',')]
    pub horizons: Vec<u64>,
    /// End the trace at the first stop instead of running to nmax.
    #[arg(long)]
    pub halt: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WalkParams {
    figure: Option<String>,
    truth: Truth,
    mu0: f64,
    mu1: f64,
    sigma: f64,
    nmax: u64,
    schedule: Vec<String>,
    stream: u64,
    walks: u64,
    horizons: Vec<u64>,
    halt: bool,
}

fn walk_preset(fig: Option<&str>) -> CliResult<WalkParams> {
    let base = WalkParams {
        figure: fig.map(str::to_owned),
        truth: Truth::H0,
        mu0: 0.0,
        mu1: 0.25,
        sigma: 1.0,
        nmax: 100,
        schedule: vec!["constant:0.05".into()],
        stream: 0,
        walks: 0,
        horizons: vec![],
        halt: false,
    };
    // a, c: H0 true with the λ = 1/8 boundary; b, d: H1 true with λ = 8.
    let (truth, lambda, stream) = match fig {
        None => return Ok(base),
        Some("fig12a") => (Truth::H0, "lr:0.125", 0),
        Some("fig12b") => (Truth::H1, "lr:8", 0),
        Some("fig12c") => (Truth::H0, "lr:0.125", 1),
        Some("fig12d") => (Truth::H1, "lr:8", 1),
        Some(id) => return Err(unknown_figure("walk", id)),
    };
    Ok(WalkParams {
        truth,
        nmax: 1000,
        schedule: vec![lambda.into()],
        stream,
        ..base
    })
}

pub fn walk(args: &WalkArgs, ctx: &Ctx) -> CliResult<Produced> {
    let r = resolve("walk", &ctx.config, args, walk_preset)?;
    let p = r.params;
    let seed = ctx.require_seed("walk")?;
    let schedules: Vec<Schedule> = p.schedule.iter().map(|s| parse_schedule(s)).collect::<CliResult<_>>()?;
    let first = *schedules
        .first()
        .ok_or_else(|| CliError::Usage("at least one --schedule is required".into()))?;
    let mut cfg = WalkConfig::new(p.truth.into(), p.mu0, p.mu1, p.sigma, p.nmax, seed, first)?;
    cfg.stream = p.stream;

    if p.walks > 0 {
        let horizons = if p.horizons.is_empty() { vec![p.nmax] } else { p.horizons.clone() };
        let mut t = Table::new(&["schedule", "walks", "n_max", "stop_fraction", "mean_stop_n"]);
        for &s in &schedules {
            let batch = run_batch(&WalkConfig { schedule: s, ..cfg }, p.walks as usize)?;
            for &h in &horizons {
                let sm = batch.summary_at(h)?;
                t.push(vec![
                    Cell::text(sm.schedule),
                    Cell::Int(sm.walks as u64),
                    Cell::Int(sm.n_max),
                    Cell::Num(sm.stop_fraction),
                    Cell::Num(sm.mean_stop_n.unwrap_or(f64::NAN)),
                ]);
            }
        }
        return Ok(Produced { table: t, parameters: r.value, seeds: vec![seed] });
    }
    if schedules.len() > 1 {
        return Err(CliError::Usage("a single walk takes one --schedule; use --walks for several".into()));
    }
    let trace = if p.halt { run_walk(&cfg)? } else { run_walk_full(&cfg)? };

    let Some(fig) = p.figure.clone() else {
        let mut t = Table::new(&["n", "Z", "p0", "p1", "lambda01", "stopped"]);
        for rec in &trace.records {
            t.push(vec![
                Cell::Int(rec.n),
                Cell::Num(rec.z),
                Cell::Num(rec.p0),
                Cell::Num(rec.p1),
                Cell::Num(rec.lambda01),
                Cell::Bool(rec.stopped),
            ]);
        }
        return Ok(Produced { table: t, parameters: r.value, seeds: vec![seed] });
    };

    let mut c = Curves::default();
    walk_curve(&mut c, "walk", &trace);
    let sep1 = (p.mu1 - p.mu0).abs() / p.sigma;
    let ns: Vec<u64> = (3..=p.nmax).collect();
    let lil = lil_boundary_points(sep1, &ns, p.truth.into())?;
    c.push("LIL boundary", "lil", lil.iter().map(|q| (q.p0, q.p1)));
    if let Schedule::LrContour { lambda } = first {
        let [lower, upper] = lr_contour_polylines(&ContourSpec::Gauss { sep: 1.0 }, lambda)?;
        c.push(&format!("lambda={lambda}/lower"), "lr", lower.iter().map(|q| (q.p0, q.p1)));
        c.push(&format!("lambda={lambda}/upper"), "lr", upper.iter().map(|q| (q.p0, q.p1)));
    }
    if p.truth == Truth::H1 {
        let alpha = 0.05;
        c.push("CLs=0.05", "line", (0..=200).map(|i| {
            let p0 = i as f64 / 200.0;
            (p0, alpha * (1.0 - p0))
        }));
    }
    Ok(Produced {
        table: c.into_table(PlotSpec::plane(fig, true)),
        parameters: r.value,
        seeds: vec![seed],
    })
}

#[derive(Debug, Args, Serialize)]
pub struct LilArgs {
    #[arg(long)]
    pub figure: Option<String>,
    /// Sample sizes to tabulate.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u64>,
    /// Per-event separation Δμ/σ of the contours.
    #[arg(long)]
    pub sep1: Option<f64>,
    /// Side of the boundary: h0 bounds p0, h1 bounds p1.
    #[arg(long, value_enum)]
    pub side: Option<Truth>,
    /// Constant threshold drawn with the boundary (fig13).
    #[arg(long)]
    pub alpha0: Option<f64>,
    /// Number of contours and walk length (fig13).
    #[arg(long)]
    pub nmax: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LilParams {
    figure: Option<String>,
    n: Vec<u64>,
    sep1: f64,
    side: Truth,
    alpha0: f64,
    nmax: u64,
}

fn lil_preset(fig: Option<&str>) -> CliResult<LilParams> {
    let base = LilParams {
        figure: fig.map(str::to_owned),
        n: vec![2, 3, 10, 100, 1000, 10_000, 100_000, 1_000_000],
        sep1: 0.25,
        side: Truth::H0,
        alpha0: 0.1,
        nmax: 50,
    };
    match fig {
        None => Ok(base),
        Some("fig13") => Ok(LilParams { sep1: 0.2, ..base }),
        Some(id) => Err(unknown_figure("lil", id)),
    }
}

pub fn lil(args: &LilArgs, ctx: &Ctx) -> CliResult<Produced> {
    let r = resolve("lil", &ctx.config, args, lil_preset)?;
    let p = r.params;
    let Some(fig) = p.figure.clone() else {
        let mut t = Table::new(&["n", "alpha_lil", "degenerate", "p0", "p1"]);
        for &n in &p.n {
            let a = alpha_lil(n)?;
            let (p0, p1) = if lil_is_degenerate(n) {
                (f64::NAN, f64::NAN)
            } else {
                match lil_boundary_points(p.sep1, &[n], p.side.into()) {
                    Ok(q) => (q[0].p0, q[0].p1),
                    // The other coordinate underflows at large n.
                    Err(pplane::Error::NoSolution(_)) if p.side == Truth::H0 => (a, f64::NAN),
                    Err(pplane::Error::NoSolution(_)) => (f64::NAN, a),
                    Err(e) => return Err(e.into()),
                }
            };
            t.push(vec![Cell::Int(n), Cell::Num(a), Cell::Bool(lil_is_degenerate(n)), Cell::Num(p0), Cell::Num(p1)]);
        }
        return Ok(Produced { table: t, parameters: r.value, seeds: vec![] });
    };

    // fig13: contours n = 1..nmax crossed by one walk with the α0/√n rule.
    let seed = ctx.require_seed("the fig13 walk")?;
    if p.nmax < 3 {
        return Err(CliError::Usage("fig13 needs nmax >= 3".into()));
    }
    let mut c = Curves::default();
    for n in 1..=p.nmax {
        let spec = ContourSpec::Gauss { sep: (n as f64).sqrt() * p.sep1 };
        let line = fixed_contour_polyline(&spec)?;
        c.push(&format!("n={n}"), "fixed", line.iter().map(|q| (q.p0, q.p1)));
    }
    let ns: Vec<u64> = (3..=p.nmax).collect();
    let lil = lil_boundary_points(p.sep1, &ns, p.side.into())?;
    c.push("LIL boundary", "lil", lil.iter().map(|q| (q.p0, q.p1)));
    c.push("alpha0", "threshold", [(p.alpha0, 1e-300), (p.alpha0, 1.0)]);
    let mut root_n = Vec::new();
    for n in 1..=p.nmax {
        let a = p.alpha0 / (n as f64).sqrt();
        root_n.push((a, fixed_contour(&ContourSpec::Gauss { sep: (n as f64).sqrt() * p.sep1 }, a)?));
    }
    c.push("alpha0/sqrt(n)", "threshold", root_n);
    let cfg = WalkConfig::new(
        p.side.into(),
        0.0,
        p.sep1,
        1.0,
        p.nmax,
        seed,
        Schedule::SqrtN { alpha0: p.alpha0 },
    )?;
    walk_curve(&mut c, "walk", &run_walk_full(&cfg)?);
    Ok(Produced {
        table: c.into_table(PlotSpec::plane(fig, true)),
        parameters: r.value,
        seeds: vec![seed],
    })
}
