//! Command-line front end for `pplane`: every command produces one table,
//! written as CSV, JSON or (for curve data) SVG.

pub mod config;
pub mod error;
pub mod output;
pub mod svg;

mod cmd_jl;
mod cmd_limits;
mod cmd_plane;
mod cmd_seq;
mod cmd_tables;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::Value;

pub use crate::config::ConfigFile;
pub use crate::cmd_limits::{verify_grids, VERIFY_GAMMAS};
pub use crate::error::{CliError, CliResult};
use crate::output::{Format, RunManifest, Table};

#[derive(Debug, Parser)]
#[command(name = "pplane", version, about = "Two-hypothesis tests in the (p0, p1) plane")]
pub struct Cli {
    /// Output encoding; svg is only available for curve data.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write here (plus a manifest) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for stochastic commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for batch Monte Carlo.
    #[arg(long, global = true, env = "PPLANE_THREADS")]
    pub threads: Option<usize>,
    /// TOML file with global keys and one table per command.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed-hypothesis contours.
    Contour(cmd_plane::ContourArgs),
    /// Likelihood-ratio contours.
    LrContour(cmd_plane::LrArgs),
    /// Decision lines, or the region of given points.
    Regions(cmd_plane::RegionArgs),
    /// Outcome probabilities and error rates of the double test.
    Outcomes(cmd_tables::OutcomeArgs),
    /// Probabilities of misleading evidence.
    Misleading(cmd_tables::MisleadingArgs),
    /// Sequential random walks in the plane.
    Walk(cmd_seq::WalkArgs),
    /// The iterated-logarithm boundary.
    Lil(cmd_seq::LilArgs),
    /// Bayes factors against p-values for a composite alternative.
    Jl(cmd_jl::JlArgs),
    /// Frequentist, CLs and Bayesian upper limits.
    Limits(cmd_limits::LimitArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Contour(_) => "contour",
            Command::LrContour(_) => "lr-contour",
            Command::Regions(_) => "regions",
            Command::Outcomes(_) => "outcomes",
            Command::Misleading(_) => "misleading",
            Command::Walk(_) => "walk",
            Command::Lil(_) => "lil",
            Command::Jl(_) => "jl",
            Command::Limits(_) => "limits",
        }
    }
}

/// Settings shared by all commands after config resolution.
pub struct Ctx {
    pub config: ConfigFile,
    pub seed: Option<u64>,
}

impl Ctx {
    pub fn require_seed(&self, what: &str) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| CliError::Usage(format!("{what} is stochastic and needs --seed")))
    }
}

/// What a command produced, before encoding.
pub struct Produced {
    pub table: Table,
    pub parameters: Value,
    pub seeds: Vec<u64>,
}

pub fn unknown_figure(command: &str, id: &str) -> CliError {
    CliError::Usage(format!("no figure preset {id:?} for `{command}`"))
}

/// Runs the command and returns the encoded output with its manifest
/// (outputs are filled in when written).
pub fn execute(cli: &Cli) -> CliResult<(String, RunManifest)> {
    let config = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let format = match cli.format {
        Some(f) => f,
        None => config.global::<String>("format")?.map_or(Ok(Format::Csv), |s| {
            <Format as clap::ValueEnum>::from_str(&s, true).map_err(|_| CliError::Usage(format!("config: unknown format {s:?}")))
        })?,
    };
    let seed = match cli.seed {
        Some(s) => Some(s),
        None => config.global::<u64>("seed")?,
    };
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => config.global::<usize>("threads")?,
    };
    if threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let ctx = Ctx { config, seed };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let produced = pool.install(|| match &cli.command {
        Command::Contour(a) => cmd_plane::contour(a, &ctx),
        Command::LrContour(a) => cmd_plane::lr_contour(a, &ctx),
        Command::Regions(a) => cmd_plane::regions(a, &ctx),
        Command::Outcomes(a) => cmd_tables::outcomes(a, &ctx),
        Command::Misleading(a) => cmd_tables::misleading(a, &ctx),
        Command::Walk(a) => cmd_seq::walk(a, &ctx),
        Command::Lil(a) => cmd_seq::lil(a, &ctx),
        Command::Jl(a) => cmd_jl::jl(a, &ctx),
        Command::Limits(a) => cmd_limits::limits(a, &ctx),
    })?;
    let body = produced.table.render(format)?;
    let manifest = RunManifest {
        command: cli.command.name().to_string(),
        parameters: produced.parameters,
        seeds: produced.seeds,
        tool_version: env!("CARGO_PKG_VERSION"),
        format,
        outputs: Vec::new(),
    };
    Ok((body, manifest))
}

/// Full run: execute and write. Returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|(body, manifest)| output::emit(&body, cli.out.as_deref(), manifest));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("pplane: {e}");
            e.exit_code()
        }
    }
}
