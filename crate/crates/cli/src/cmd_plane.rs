use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use pplane::contours::{
    asimov_medians, classify_region, cls, fixed_contour, fixed_contour_p0, fixed_contour_polyline,
    fixed_lr_intersections, lr_contour_polylines, poisson_fixed_points, poisson_lr_points, punzi_separation,
};
use pplane::families::transformed_pdf;
use pplane::{ContourSpec, ExclusionRule, PPoint};

use crate::config::resolve;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Curves, PlotSpec, Table};
use crate::{unknown_figure, Ctx, Produced};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gauss,
    Cauchy,
    Gamma,
    Poisson,
}

impl Family {
    fn sep_spec(self, sep: f64) -> CliResult<ContourSpec> {
        match self {
            Family::Gauss => Ok(ContourSpec::Gauss { sep }),
            Family::Cauchy => Ok(ContourSpec::Cauchy { sep }),
            _ => Err(CliError::Usage(format!("--sep applies to gauss and cauchy, not {self:?}"))),
        }
    }
}

fn pts(v: &[PPoint]) -> impl Iterator<Item = (f64, f64)> + '_ {
    v.iter().map(|p| (p.p0, p.p1))
}

fn vertical(x: f64) -> [(f64, f64); 2] {
    [(x, 0.0), (x, 1.0)]
}

fn horizontal(y: f64) -> [(f64, f64); 2] {
    [(0.0, y), (1.0, y)]
}

fn auto_counts(max_count: u64, mus: impl Iterator<Item = f64>) -> u64 {
    if max_count > 0 {
        return max_count;
    }
    let top = mus.fold(0.0, f64::max);
    (4.0 * top + 40.0).ceil() as u64
}

#[derive(Debug, Args, Serialize)]
pub struct ContourArgs {
    #[arg(long)]
    pub figure: Option<String>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Separations Δμ/σ (gauss) or Δμ/γ (cauchy).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub sep: Vec<f64>,
    /// Gamma rate ratios μ1/μ0.
    #[arg(long, value_delimiter = ',')]
    pub ratio: Vec<f64>,
    /// Gamma: number of decay times.
    #[arg(long)]
    pub n: Option<u32>,
    /// Poisson: mean under H0.
    #[arg(long)]
    pub mu0: Option<f64>,
    /// Poisson: means under H1.
    #[arg(long, value_delimiter = ',')]
    pub mu1: Vec<f64>,
    /// Poisson: largest count (0 picks one from the means).
    #[arg(long)]
    pub max_count: Option<u64>,
    /// Add median points under each hypothesis.
    #[arg(long)]
    pub medians: bool,
    /// Draw the p0 = alpha0 cut.
    #[arg(long)]
    pub alpha0: Option<f64>,
    /// Draw the p1 = alpha1 cut.
    #[arg(long)]
    pub alpha1: Option<f64>,
    /// Mark β0 and β1 on the contour with this separation.
    #[arg(long)]
    pub beta_sep: Option<f64>,
    /// Emit the Cauchy density and its transformed counterpart instead.
    #[arg(long)]
    pub transform_pdf: bool,
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContourParams {
    figure: Option<String>,
    family: Family,
    sep: Vec<f64>,
    ratio: Vec<f64>,
    n: u32,
    mu0: f64,
    mu1: Vec<f64>,
    max_count: u64,
    medians: bool,
    alpha0: Option<f64>,
    alpha1: Option<f64>,
    beta_sep: Option<f64>,
    transform_pdf: bool,
    log: bool,
}

impl Default for ContourParams {
    fn default() -> Self {
        ContourParams {
            figure: None,
            family: Family::Gauss,
            sep: vec![1.67],
            ratio: vec![3.0],
            n: 1,
            mu0: 10.0,
            mu1: vec![20.0],
            max_count: 0,
            medians: false,
            alpha0: None,
            alpha1: None,
            beta_sep: None,
            transform_pdf: false,
            log: false,
        }
    }
}

fn contour_preset(fig: Option<&str>) -> CliResult<ContourParams> {
    let three = vec![0.0, 1.67, 3.33];
    let base = ContourParams {
        figure: fig.map(str::to_owned),
        ..Default::default()
    };
    Ok(match fig {
        None => base,
        Some("fig3a") => ContourParams { sep: three, medians: true, ..base },
        Some("fig3b") => ContourParams { family: Family::Cauchy, sep: three, medians: true, ..base },
        Some("fig3c") => ContourParams { family: Family::Gamma, ratio: vec![1.0, 3.0, 10.0], medians: true, ..base },
        Some("fig3d") => ContourParams { family: Family::Poisson, mu1: vec![10.0, 20.0, 30.0], ..base },
        Some("fig4") => ContourParams {
            sep: three,
            alpha0: Some(0.05),
            alpha1: Some(0.10),
            beta_sep: Some(1.67),
            ..base
        },
        Some("fig5") => ContourParams { family: Family::Cauchy, transform_pdf: true, ..base },
        Some(id) => return Err(unknown_figure("contour", id)),
    })
}

pub fn contour(args: &ContourArgs, ctx: &Ctx) -> CliResult<Produced> {
    let r = resolve("contour", &ctx.config, args, contour_preset)?;
    let p = r.params;
    let title = p.figure.clone().unwrap_or_else(|| "fixed-hypothesis contours".into());
    let mut c = Curves::default();

    if p.transform_pdf {
        // Cauchy with μc = γ = 1 and its image for a unit Gaussian shift.
        let ys: Vec<f64> = (0..=800).map(|i| -6.0 + 0.02 * i as f64).collect();
        c.push("cauchy", "pdf", ys.iter().map(|&y| (y, transformed_pdf(y, 1.0, 1.0, 0.0))));
        c.push("transformed", "pdf", ys.iter().map(|&y| (y, transformed_pdf(y, 1.0, 1.0, 1.0))));
        let plot = PlotSpec {
            title,
            x_label: "t".into(),
            y_label: "density".into(),
            x_log: false,
            y_log: false,
            x_range: None,
            y_range: None,
        };
        return Ok(Produced { table: c.into_table(plot), parameters: r.value, seeds: vec![] });
    }

    let mut specs: Vec<(String, ContourSpec)> = Vec::new();
    match p.family {
        Family::Gauss | Family::Cauchy => {
            for &s in &p.sep {
                specs.push((format!("sep={s}"), p.family.sep_spec(s)?));
            }
        }
        Family::Gamma => {
            for &ratio in &p.ratio {
                specs.push((format!("ratio={ratio} n={}", p.n), ContourSpec::Gamma { ratio, n: p.n }));
            }
        }
        Family::Poisson => {
            for &mu1 in &p.mu1 {
                specs.push((format!("mu0={} mu1={mu1}", p.mu0), ContourSpec::Poisson { mu0: p.mu0, mu1 }));
            }
        }
    }
    if specs.is_empty() {
        return Err(CliError::Usage("no contours requested".into()));
    }
    let max_count = auto_counts(p.max_count, p.mu1.iter().copied().chain([p.mu0]));
    for (name, spec) in &specs {
        spec.validate()?;
        match *spec {
            ContourSpec::Poisson { mu0, mu1 } => {
                let v = poisson_fixed_points(mu0, mu1, 0..=max_count)?;
                c.push(name, "poisson", v.iter().map(|(_, q)| (q.p0, q.p1)));
            }
            _ => c.push(name, "fixed", pts(&fixed_contour_polyline(spec)?)),
        }
        if p.medians {
            let m = asimov_medians(spec)?;
            c.push(&format!("{name} median|H0"), "median", [(0.5, m.median_p1_under_h0)]);
            c.push(&format!("{name} median|H1"), "median", [(m.median_p0_under_h1, 0.5)]);
        }
    }
    if let Some(a0) = p.alpha0 {
        c.push("alpha0", "line", vertical(a0));
    }
    if let Some(a1) = p.alpha1 {
        c.push("alpha1", "line", horizontal(a1));
    }
    if let (Some(a0), Some(a1)) = (p.alpha0, p.alpha1) {
        if p.family == Family::Gauss {
            c.push("punzi", "marker", [(a0, a1)]);
            let s = punzi_separation(a0, a1)?;
            c.push(&format!("punzi sep={s:.6}"), "fixed", pts(&fixed_contour_polyline(&ContourSpec::Gauss { sep: s })?));
        }
        if let Some(bs) = p.beta_sep {
            let spec = p.family.sep_spec(bs)?;
            c.push("beta0", "marker", [(a0, fixed_contour(&spec, a0)?)]);
            c.push("beta1", "marker", [(fixed_contour_p0(&spec, a1)?, a1)]);
        }
    }
    Ok(Produced {
        table: c.into_table(PlotSpec::plane(title, p.log)),
        parameters: r.value,
        seeds: vec![],
    })
}

#[derive(Debug, Args, Serialize)]
pub struct LrArgs {
    #[arg(long)]
    pub figure: Option<String>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Likelihood ratios L0/L1.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    /// Gamma: numbers of decay times.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
    /// Gamma: H1 rate below the H0 rate.
    #[arg(long)]
    pub falling: bool,
    /// Poisson: means under H0.
    #[arg(long, value_delimiter = ',')]
    pub mu0: Vec<f64>,
    #[arg(long)]
    pub max_count: Option<u64>,
    /// Overlay the Gaussian contours with the same ratios.
    #[arg(long)]
    pub compare_gauss: bool,
    /// Overlay fixed contours (gauss/cauchy) at these separations.
    #[arg(long, value_delimiter = ',')]
    pub fixed_sep: Vec<f64>,
    /// Mark where the fixed contours cross these likelihood ratios.
    #[arg(long, value_delimiter = ',')]
    pub intersect: Vec<f64>,
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LrParams {
    figure: Option<String>,
    family: Family,
    lambda: Vec<f64>,
    n: Vec<u32>,
    falling: bool,
    mu0: Vec<f64>,
    max_count: u64,
    compare_gauss: bool,
    fixed_sep: Vec<f64>,
    intersect: Vec<f64>,
    log: bool,
}

const FIG6_LAMBDAS: [f64; 5] = [0.37, 0.83, 1.0, 1.2, 2.7];
const WIDE_LAMBDAS: [f64; 4] = [1.0 / 32.0, 1.0 / 8.0, 8.0, 32.0];

fn lr_preset(fig: Option<&str>) -> CliResult<LrParams> {
    let base = LrParams {
        figure: fig.map(str::to_owned),
        family: Family::Gauss,
        lambda: vec![1.0 / 32.0, 1.0 / 8.0, 1.0, 8.0, 32.0],
        n: vec![1],
        falling: false,
        mu0: vec![10.0],
        max_count: 0,
        compare_gauss: false,
        fixed_sep: vec![],
        intersect: vec![],
        log: false,
    };
    let six = FIG6_LAMBDAS.to_vec();
    Ok(match fig {
        None => base,
        Some("fig6a") => LrParams { lambda: six, ..base },
        Some("fig6b") => LrParams { family: Family::Cauchy, lambda: six, ..base },
        Some("fig6c") => LrParams { family: Family::Gamma, lambda: six, ..base },
        Some("fig6d") => LrParams { family: Family::Poisson, lambda: six, ..base },
        Some("fig7") => LrParams {
            family: Family::Gamma,
            lambda: WIDE_LAMBDAS.to_vec(),
            n: vec![1, 4, 16, 64],
            compare_gauss: true,
            log: true,
            ..base
        },
        Some("fig8") => LrParams {
            family: Family::Poisson,
            lambda: WIDE_LAMBDAS.to_vec(),
            mu0: vec![1.0, 4.0, 16.0, 64.0],
            compare_gauss: true,
            log: true,
            ..base
        },
        Some("fig9") => LrParams { lambda: six, fixed_sep: vec![1.67], intersect: vec![1.2], ..base },
        Some("fig10") => LrParams {
            fixed_sep: vec![1.67, 3.33],
            intersect: WIDE_LAMBDAS.to_vec(),
            log: true,
            ..base
        },
        Some(id) => return Err(unknown_figure("lr-contour", id)),
    })
}

fn push_branches(c: &mut Curves, name: &str, spec: &ContourSpec, lambda: f64) -> CliResult<()> {
    let [lower, upper] = lr_contour_polylines(spec, lambda)?;
    c.push(&format!("{name}/lower"), "lr", pts(&lower));
    c.push(&format!("{name}/upper"), "lr", pts(&upper));
    Ok(())
}

pub fn lr_contour(args: &LrArgs, ctx: &Ctx) -> CliResult<Produced> {
    let r = resolve("lr-contour", &ctx.config, args, lr_preset)?;
    let p = r.params;
    if p.lambda.is_empty() {
        return Err(CliError::Usage("no likelihood ratios requested".into()));
    }
    let mut c = Curves::default();
    for &l in &p.lambda {
        match p.family {
            // Separation drops out of these contours.
            Family::Gauss | Family::Cauchy => push_branches(&mut c, &format!("lambda={l}"), &p.family.sep_spec(1.0)?, l)?,
            Family::Gamma => {
                let ratio = if p.falling { 0.5 } else { 2.0 };
                for &n in &p.n {
                    push_branches(&mut c, &format!("gamma n={n} lambda={l}"), &ContourSpec::Gamma { ratio, n }, l)?;
                }
            }
            Family::Poisson => {
                for &mu0 in &p.mu0 {
                    let max = auto_counts(p.max_count, [mu0, l.abs().ln().abs()].into_iter());
                    let v = poisson_lr_points(mu0, l, 0..=max)?;
                    c.push(&format!("poisson mu0={mu0} lambda={l}"), "poisson", v.iter().map(|q| (q.p0, q.p1)));
                }
            }
        }
        if p.compare_gauss && p.family != Family::Gauss {
            push_branches(&mut c, &format!("gauss lambda={l}"), &ContourSpec::Gauss { sep: 1.0 }, l)?;
        }
    }
    for &s in &p.fixed_sep {
        let spec = p.family.sep_spec(s)?;
        c.push(&format!("sep={s}"), "fixed", pts(&fixed_contour_polyline(&spec)?));
        for &l in &p.intersect {
            let x = fixed_lr_intersections(&spec, l)?;
            c.push(&format!("sep={s} x lambda={l}"), "marker", pts(&x));
        }
    }
    let title = p.figure.clone().unwrap_or_else(|| "likelihood-ratio contours".into());
    Ok(Produced {
        table: c.into_table(PlotSpec::plane(title, p.log)),
        parameters: r.value,
        seeds: vec![],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    P1,
    Cls,
}

impl From<Rule> for ExclusionRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::P1 => ExclusionRule::P1Cut,
            Rule::Cls => ExclusionRule::ClsCut,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RegionArgs {
    #[arg(long)]
    pub figure: Option<String>,
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long, value_enum)]
    pub rule: Option<Rule>,
    /// Points to classify (paired with --p1); without them the decision
    /// lines are emitted.
    #[arg(long, value_delimiter = ',')]
    pub p0: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub p1: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionParams {
    figure: Option<String>,
    alpha0: f64,
    alpha1: f64,
    rule: Rule,
    p0: Vec<f64>,
    p1: Vec<f64>,
}

fn region_preset(fig: Option<&str>) -> CliResult<RegionParams> {
    match fig {
        None | Some("fig2") => Ok(RegionParams {
            figure: fig.map(str::to_owned),
            alpha0: 0.05,
            alpha1: 0.10,
            rule: Rule::P1,
            p0: vec![],
            p1: vec![],
        }),
        Some(id) => Err(unknown_figure("regions", id)),
    }
}

pub fn regions(args: &RegionArgs, ctx: &Ctx) -> CliResult<Produced> {
    let r = resolve("regions", &ctx.config, args, region_preset)?;
    let p = r.params;
    for a in [p.alpha0, p.alpha1] {
        if !(a > 0.0 && a < 1.0) {
            return Err(CliError::Usage(format!("thresholds must lie in (0, 1), got {a}")));
        }
    }
    if p.p0.len() != p.p1.len() {
        return Err(CliError::Usage("--p0 and --p1 need the same number of values".into()));
    }
    if !p.p0.is_empty() {
        let mut t = Table::new(&["p0", "p1", "cls", "region"]);
        for (&p0, &p1) in p.p0.iter().zip(&p.p1) {
            if !((0.0..=1.0).contains(&p0) && (0.0..=1.0).contains(&p1)) {
                return Err(CliError::Usage(format!("p-values must lie in [0, 1], got ({p0}, {p1})")));
            }
            let pt = PPoint::new(p0, p1);
            let region = classify_region(pt, p.alpha0, p.alpha1, p.rule.into());
            t.push(vec![
                Cell::Num(p0),
                Cell::Num(p1),
                Cell::Num(cls(pt).unwrap_or(f64::NAN)),
                Cell::text(region.label()),
            ]);
        }
        return Ok(Produced { table: t, parameters: r.value, seeds: vec![] });
    }
    let mut c = Curves::default();
    c.push("p0=alpha0", "line", vertical(p.alpha0));
    c.push("p1=alpha1", "line", horizontal(p.alpha1));
    c.push("CLs=alpha1", "line", [(0.0, p.alpha1), (1.0, 0.0)]);
    c.push("p1=1-p0", "line", [(0.0, 1.0), (1.0, 0.0)]);
    let title = p.figure.clone().unwrap_or_else(|| "decision lines".into());
    Ok(Produced {
        table: c.into_table(PlotSpec::plane(title, false)),
        parameters: r.value,
        seeds: vec![],
    })
}
