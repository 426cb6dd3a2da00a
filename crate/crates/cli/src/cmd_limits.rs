use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use pplane::limits::{gauss_coverage, limit_report, verify_bayes_cls_equality, LimitFamily, LimitRequest};
use pplane::Observation;

use crate::config::resolve;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};
use crate::{unknown_figure, Ctx, Produced};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitKind {
    Gauss,
    Cauchy,
    Poisson,
}

/// Levels used by `--verify`.
pub const VERIFY_GAMMAS: [f64; 4] = [0.68, 0.90, 0.95, 0.99];

/// Observation grids used by `--verify`.
pub fn verify_grids() -> [(LimitFamily, Vec<Observation>); 3] {
    let gauss = (0..=28).map(|i| Observation::Continuous(-2.0 + 0.25 * i as f64)).collect();
    let poisson = (0..=20).map(Observation::Count).collect();
    let cauchy = (0..=14).map(|i| Observation::Continuous(-2.0 + 0.5 * i as f64)).collect();
    [
        (LimitFamily::GaussLocation { sigma: 1.0 }, gauss),
        (LimitFamily::Poisson, poisson),
        (LimitFamily::CauchyLocation { gamma: 1.0 }, cauchy),
    ]
}

#[derive(Debug, Args, Serialize)]
pub struct LimitArgs {
    #[arg(long)]
    pub figure: Option<String>,
    #[arg(long, value_enum)]
    pub family: Option<LimitKind>,
    /// Continuous observations (gauss, cauchy).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    /// Observed counts (poisson).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u64>,
    /// Lower edge of the parameter space.
    #[arg(long, allow_negative_numbers = true)]
    pub floor: Option<f64>,
    /// No lower edge (location families only).
    #[arg(long)]
    pub unbounded: bool,
    /// Width σ (gauss) or half-width γ (cauchy).
    #[arg(long)]
    pub scale: Option<f64>,
    /// Confidence levels.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<f64>,
    /// Check CLs against the flat-prior Bayesian limits on fixed grids.
    #[arg(long)]
    pub verify: bool,
    /// Seeded coverage of the Gaussian limits at --mu-true.
    #[arg(long)]
    pub coverage: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub mu_true: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LimitParams {
    figure: Option<String>,
    family: LimitKind,
    x: Vec<f64>,
    n: Vec<u64>,
    floor: f64,
    unbounded: bool,
    scale: f64,
    gamma: Vec<f64>,
    verify: bool,
    coverage: bool,
    mu_true: f64,
    trials: u64,
}

fn limit_preset(fig: Option<&str>) -> CliResult<LimitParams> {
    if let Some(id) = fig {
        return Err(unknown_figure("limits", id));
    }
    Ok(LimitParams {
        figure: None,
        family: LimitKind::Gauss,
        x: vec![1.0],
        n: vec![3],
        floor: 0.0,
        unbounded: false,
        scale: 1.0,
        gamma: vec![0.95],
        verify: false,
        coverage: false,
        mu_true: 0.0,
        trials: 10_000,
    })
}

pub fn limits(args: &LimitArgs, ctx: &Ctx) -> CliResult<Produced> {
    let r = resolve("limits", &ctx.config, args, limit_preset)?;
    let p = r.params;
    let floor = if p.unbounded { f64::NEG_INFINITY } else { p.floor };

    if p.verify {
        let mut t = Table::new(&["family", "mu_floor", "cases", "max_abs_diff", "max_scaled_diff", "tolerance", "passed"]);
        for (family, obs) in verify_grids() {
            // The Poisson mean cannot go below zero.
            let fl = if family == LimitFamily::Poisson { floor.max(0.0) } else { floor };
            let rep = verify_bayes_cls_equality(family, fl, &obs, &VERIFY_GAMMAS)?;
            t.push(vec![
                Cell::text(rep.family),
                Cell::Num(rep.mu_floor),
                Cell::Int(rep.rows.len() as u64),
                Cell::Num(rep.max_abs_diff),
                Cell::Num(rep.max_scaled_diff),
                Cell::Num(rep.tolerance),
                Cell::Bool(rep.passed),
            ]);
        }
        return Ok(Produced { table: t, parameters: r.value, seeds: vec![] });
    }

    if p.coverage {
        let seed = ctx.require_seed("limits --coverage")?;
        if p.family != LimitKind::Gauss {
            return Err(CliError::Usage("coverage is implemented for the gauss family".into()));
        }
        let mut t = Table::new(&["gamma", "mu_true", "trials", "freq_exclusion_rate", "cls_exclusion_rate"]);
        for &g in &p.gamma {
            let c = gauss_coverage(p.scale, floor, p.mu_true, g, p.trials, seed)?;
            t.push(vec![Cell::Num(g), Cell::Num(c.mu_true), Cell::Int(c.trials), Cell::Num(c.freq_rate()), Cell::Num(c.cls_rate())]);
        }
        return Ok(Produced { table: t, parameters: r.value, seeds: vec![seed] });
    }

    let (family, obs): (LimitFamily, Vec<Observation>) = match p.family {
        LimitKind::Gauss => (LimitFamily::GaussLocation { sigma: p.scale }, p.x.iter().map(|&x| Observation::Continuous(x)).collect()),
        LimitKind::Cauchy => (LimitFamily::CauchyLocation { gamma: p.scale }, p.x.iter().map(|&x| Observation::Continuous(x)).collect()),
        LimitKind::Poisson => (LimitFamily::Poisson, p.n.iter().map(|&n| Observation::Count(n)).collect()),
    };
    let mut t = Table::new(&["family", "observation", "gamma", "freq_ul", "cls_ul", "bayes_ul", "max_abs_diff"]);
    for &o in &obs {
        for &g in &p.gamma {
            let rep = limit_report(&LimitRequest::new(family, o, floor, g)?)?;
            let o = match o {
                Observation::Continuous(x) => Cell::Num(x),
                Observation::Count(n) => Cell::Int(n),
            };
            t.push(vec![
                Cell::text(rep.family),
                o,
                Cell::Num(rep.gamma),
                Cell::Num(rep.freq_ul),
                Cell::Num(rep.cls_ul),
                Cell::Num(rep.bayes_ul),
                Cell::Num(rep.max_abs_diff),
            ]);
        }
    }
    Ok(Produced { table: t, parameters: r.value, seeds: vec![] })
}
