use clap::Args;
use serde::{Deserialize, Serialize};

use pplane::double_test::{error_rates, outcome_table, DoubleTestRates};
use pplane::evidence::misleading_table;
use pplane::ContourSpec;

use crate::cmd_plane::Family;
use crate::config::resolve;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};
use crate::{unknown_figure, Ctx, Produced};

#[derive(Debug, Args, Serialize)]
pub struct OutcomeArgs {
    #[arg(long)]
    pub figure: Option<String>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long)]
    pub sep: Option<f64>,
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    /// Use these rates instead of reading them off a contour (needs both).
    #[arg(long)]
    pub beta0: Option<f64>,
    #[arg(long)]
    pub beta1: Option<f64>,
    /// Report error rates and power instead of outcome probabilities.
    #[arg(long)]
    pub errors: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutcomeParams {
    figure: Option<String>,
    family: Family,
    sep: f64,
    ratio: f64,
    n: u32,
    alpha0: f64,
    alpha1: f64,
    beta0: Option<f64>,
    beta1: Option<f64>,
    errors: bool,
}

fn outcome_preset(fig: Option<&str>) -> CliResult<OutcomeParams> {
    if let Some(id) = fig {
        return Err(unknown_figure("outcomes", id));
    }
    Ok(OutcomeParams {
        figure: None,
        family: Family::Gauss,
        sep: 1.67,
        ratio: 3.0,
        n: 1,
        alpha0: 0.05,
        alpha1: 0.10,
        beta0: None,
        beta1: None,
        errors: false,
    })
}

pub fn outcomes(args: &OutcomeArgs, ctx: &Ctx) -> CliResult<Produced> {
    let r = resolve("outcomes", &ctx.config, args, outcome_preset)?;
    let p = r.params;
    let rates = match (p.beta0, p.beta1) {
        (Some(b0), Some(b1)) => DoubleTestRates::new(p.alpha0, p.alpha1, b0, b1)?,
        (None, None) => {
            let spec = match p.family {
                Family::Gauss => ContourSpec::Gauss { sep: p.sep },
                Family::Cauchy => ContourSpec::Cauchy { sep: p.sep },
                Family::Gamma => ContourSpec::Gamma { ratio: p.ratio, n: p.n },
                Family::Poisson => ContourSpec::Poisson { mu0: 1.0, mu1: 2.0 },
            };
            DoubleTestRates::from_contour(&spec, p.alpha0, p.alpha1)?
        }
        _ => return Err(CliError::Usage("--beta0 and --beta1 go together".into())),
    };
    let table = if p.errors {
        let e = error_rates(&rates);
        let mut t = Table::new(&["quantity", "value"]);
        for (k, v) in [
            ("type_ia", e.type_ia),
            ("type_ib", e.type_ib),
            ("type_iia", e.type_iia),
            ("type_iib", e.type_iib),
            ("both_type_i", e.both_type_i),
            ("both_type_ii", e.both_type_ii),
            ("power", e.power),
            ("beta0", rates.beta0),
            ("beta1", rates.beta1),
        ] {
            t.push(vec![Cell::text(k), Cell::Num(v)]);
        }
        t
    } else {
        let mut t = Table::new(&["outcome", "prob_h0", "prob_h1"]);
        for row in outcome_table(&rates).rows {
            t.push(vec![Cell::text(row.outcome.label()), Cell::Num(row.prob_h0), Cell::Num(row.prob_h1)]);
        }
        t
    };
    Ok(Produced { table, parameters: r.value, seeds: vec![] })
}

#[derive(Debug, Args, Serialize)]
pub struct MisleadingArgs {
    #[arg(long)]
    pub figure: Option<String>,
    /// Separations Δμ/σ.
    #[arg(long, value_delimiter = ',')]
    pub sep: Vec<f64>,
    /// Evidence benchmarks k > 1.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MisleadingParams {
    figure: Option<String>,
    sep: Vec<f64>,
    k: Vec<f64>,
}

fn misleading_preset(fig: Option<&str>) -> CliResult<MisleadingParams> {
    match fig {
        None | Some("fig11") => Ok(MisleadingParams {
            figure: fig.map(str::to_owned),
            sep: vec![1.67, 3.33],
            k: vec![8.0, 32.0],
        }),
        Some(id) => Err(unknown_figure("misleading", id)),
    }
}

pub fn misleading(args: &MisleadingArgs, ctx: &Ctx) -> CliResult<Produced> {
    let r = resolve("misleading", &ctx.config, args, misleading_preset)?;
    let p = r.params;
    let mut t = Table::new(&["separation", "k", "p_misleading_h1_under_h0", "p_misleading_h0_under_h1"]);
    for row in misleading_table(&p.sep, &p.k)? {
        t.push(vec![
            Cell::Num(row.separation),
            Cell::Num(row.k),
            Cell::Num(row.for_h1_under_h0),
            Cell::Num(row.for_h0_under_h1),
        ]);
    }
    Ok(Produced { table: t, parameters: r.value, seeds: vec![] })
}
