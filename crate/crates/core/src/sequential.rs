//! Sequential testing on the mean of a Gaussian: events are added one at a
//! time and the walk in the (p0, p1) plane stops when a threshold schedule
//! rejects.
//!
//! Each walk draws from its own ChaCha8 stream: the seed selects the key and
//! the walk index selects the stream, so walk `i` of a batch is the same
//! sequence no matter how the batch is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contours::{cls, fixed_contour, fixed_contour_p0, ContourSpec};
use crate::error::{Error, Result};
use crate::families::{Hypothesis, PPoint};
use crate::specfun::{erfc, p_to_z, z_to_p};
use crate::Real;

/// Discovery threshold of the 3σ convention.
pub const ALPHA_3SIGMA: Real = 1.35e-3;
/// Discovery threshold of the 5σ convention.
pub const ALPHA_5SIGMA: Real = 2.87e-7;

/// `½[1 - erf(√(ln ln n))]`, the iterated-logarithm boundary for p0.
///
/// For `n = 2`, `ln ln 2 < 0`; the square-root argument is clamped at zero
/// and the value is 1/2. See [`lil_is_degenerate`].
pub fn alpha_lil(n: u64) -> Result<Real> {
    if n < 2 {
        return Err(Error::domain("alpha_lil", format!("n >= 2 required, got {n}")));
    }
    let ll = (n as Real).ln().ln().max(0.0);
    Ok(0.5 * erfc(ll.sqrt()))
}

/// True where [`alpha_lil`] had to clamp a negative `ln ln n`.
pub fn lil_is_degenerate(n: u64) -> bool {
    n < 3
}

/// When a walk stops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// Reject H0 when `p0 <= alpha0`.
    Constant { alpha0: Real },
    /// Reject H0 when `p0 <= alpha0 / √n`.
    SqrtN { alpha0: Real },
    /// Stop when `λ01` reaches `lambda`: from above when `lambda < 1`
    /// (evidence against H0), from below when `lambda > 1`.
    LrContour { lambda: Real },
    /// Exclude H1 when `CLs <= alpha`.
    Cls { alpha: Real },
}

impl Schedule {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Schedule::Constant { alpha0 } | Schedule::SqrtN { alpha0 } => alpha0 > 0.0 && alpha0 < 1.0,
            Schedule::LrContour { lambda } => lambda > 0.0 && lambda.is_finite() && lambda != 1.0,
            Schedule::Cls { alpha } => alpha > 0.0 && alpha < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain("Schedule", format!("invalid threshold in {self:?}")))
        }
    }

    /// Short label such as `constant:0.05`, the form the CLI accepts.
    pub fn label(&self) -> String {
        match *self {
            Schedule::Constant { alpha0 } => format!("constant:{alpha0}"),
            Schedule::SqrtN { alpha0 } => format!("sqrt_n:{alpha0}"),
            Schedule::LrContour { lambda } => format!("lr:{lambda}"),
            Schedule::Cls { alpha } => format!("cls:{alpha}"),
        }
    }
}

impl std::str::FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| Error::domain("Schedule", format!("expected kind:value, got {s:?}")))?;
        let v: Real = value
            .trim()
            .parse()
            .map_err(|_| Error::domain("Schedule", format!("bad number {value:?}")))?;
        let sched = match kind.trim() {
            "constant" => Schedule::Constant { alpha0: v },
            "sqrt_n" | "sqrtn" | "sqrt-n" => Schedule::SqrtN { alpha0: v },
            "lr" | "lr_contour" => Schedule::LrContour { lambda: v },
            "cls" => Schedule::Cls { alpha: v },
            other => return Err(Error::domain("Schedule", format!("unknown schedule {other:?}"))),
        };
        sched.validate()?;
        Ok(sched)
    }
}

/// Parameters of one walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub truth: Hypothesis,
    pub mu0: Real,
    pub mu1: Real,
    pub sigma: Real,
    pub n_max: u64,
    pub seed: u64,
    /// Stream index within the seed; batches use the walk index.
    pub stream: u64,
    pub schedule: Schedule,
}

impl WalkConfig {
    pub fn new(truth: Hypothesis, mu0: Real, mu1: Real, sigma: Real, n_max: u64, seed: u64, schedule: Schedule) -> Result<Self> {
        let c = WalkConfig {
            truth,
            mu0,
            mu1,
            sigma,
            n_max,
            seed,
            stream: 0,
            schedule,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::domain("WalkConfig", format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.mu0.is_finite() && self.mu1.is_finite()) || self.mu0 == self.mu1 {
            return Err(Error::domain("WalkConfig", "mu0 and mu1 must be finite and distinct"));
        }
        if self.n_max < 2 {
            return Err(Error::domain("WalkConfig", format!("n_max >= 2 required, got {}", self.n_max)));
        }
        self.schedule.validate()
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// State of the walk after `n` events.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub n: u64,
    /// Standardized partial mean `(x̄ - μ0) / (σ/√n)`.
    pub z: Real,
    pub p0: Real,
    pub p1: Real,
    pub lambda01: Real,
    pub stopped: bool,
}

/// Sequence of walk states; at most one record, the first crossing of the
/// stopping rule, is marked stopped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub records: Vec<WalkRecord>,
}

impl WalkTrace {
    pub fn stopped_at(&self) -> Option<u64> {
        self.records.iter().find(|r| r.stopped).map(|r| r.n)
    }
}

/// Precomputed stopping test, so batches avoid special functions per step
/// where the schedule allows it.
struct Stopper {
    schedule: Schedule,
    /// Critical H1-ward significance per n (index n - 1), or one value for
    /// the constant schedule.
    z_crit: Vec<Real>,
}

impl Stopper {
    fn new(schedule: Schedule, n_max: u64) -> Result<Self> {
        let z_crit = match schedule {
            Schedule::Constant { alpha0 } => vec![p_to_z(alpha0)?],
            Schedule::SqrtN { alpha0 } => (1..=n_max)
                .map(|n| p_to_z(alpha0 / (n as Real).sqrt()))
                .collect::<Result<_>>()?,
            _ => Vec::new(),
        };
        Ok(Stopper { schedule, z_crit })
    }

    /// `w0` is the significance against H0 toward H1, `w1` against H1
    /// toward H0, `ln_l` is `ln λ01`.
    fn stops(&self, n: u64, w0: Real, w1: Real, ln_l: Real) -> bool {
        match self.schedule {
            Schedule::Constant { .. } => w0 >= self.z_crit[0],
            Schedule::SqrtN { .. } => w0 >= self.z_crit[(n - 1) as usize],
            Schedule::LrContour { lambda } => {
                if lambda < 1.0 {
                    ln_l <= lambda.ln()
                } else {
                    ln_l >= lambda.ln()
                }
            }
            Schedule::Cls { alpha } => {
                let p = PPoint::new(z_to_p(w0), z_to_p(w1));
                cls(p).map(|c| c <= alpha).unwrap_or(false)
            }
        }
    }
}

struct Step {
    z: Real,
    w0: Real,
    w1: Real,
    ln_l: Real,
}

fn step(cfg: &WalkConfig, n: u64, sum: Real) -> Step {
    let nf = n as Real;
    let mean = sum / nf;
    let root_n = nf.sqrt();
    let dir = if cfg.mu1 > cfg.mu0 { 1.0 } else { -1.0 };
    let z = (mean - cfg.mu0) / cfg.sigma * root_n;
    let w1 = dir * (cfg.mu1 - mean) / cfg.sigma * root_n;
    let (d0, d1) = ((mean - cfg.mu0) / cfg.sigma, (mean - cfg.mu1) / cfg.sigma);
    let ln_l = 0.5 * nf * (d1 - d0) * (d1 + d0);
    Step { z, w0: dir * z, w1, ln_l }
}

/// Runs the walk on the given events instead of random draws, recording
/// every step. Stops at the first rejection, at `n_max`, or when the
/// events run out.
pub fn run_walk_from_events<I>(cfg: &WalkConfig, events: I) -> Result<WalkTrace>
where
    I: IntoIterator<Item = Real>,
{
    walk_records(cfg, events, true)
}

fn walk_records<I>(cfg: &WalkConfig, events: I, halt: bool) -> Result<WalkTrace>
where
    I: IntoIterator<Item = Real>,
{
    cfg.validate()?;
    let mut fired = false;
    let stopper = Stopper::new(cfg.schedule, cfg.n_max)?;
    let mut records = Vec::new();
    let mut sum = 0.0;
    for (i, x) in events.into_iter().take(cfg.n_max as usize).enumerate() {
        let n = i as u64 + 1;
        sum += x;
        let s = step(cfg, n, sum);
        let stopped = !fired && stopper.stops(n, s.w0, s.w1, s.ln_l);
        fired |= stopped;
        records.push(WalkRecord {
            n,
            z: s.z,
            p0: z_to_p(s.w0),
            p1: z_to_p(s.w1),
            lambda01: s.ln_l.exp(),
            stopped,
        });
        if stopped && halt {
            break;
        }
    }
    Ok(WalkTrace { records })
}

fn events(cfg: &WalkConfig) -> impl Iterator<Item = Real> {
    let mut rng = cfg.rng();
    let mu = match cfg.truth {
        Hypothesis::H0 => cfg.mu0,
        Hypothesis::H1 => cfg.mu1,
    };
    let sigma = cfg.sigma;
    std::iter::repeat_with(move || {
        let z: Real = StandardNormal.sample(&mut rng);
        mu + sigma * z
    })
}

/// Runs one seeded walk, recording every step.
pub fn run_walk(cfg: &WalkConfig) -> Result<WalkTrace> {
    run_walk_from_events(cfg, events(cfg))
}

/// Like [`run_walk`] but continues to `n_max` after the stopping rule
/// fires, so the whole path is available for plotting.
pub fn run_walk_full(cfg: &WalkConfig) -> Result<WalkTrace> {
    walk_records(cfg, events(cfg), false)
}

fn stop_time(cfg: &WalkConfig, stopper: &Stopper) -> Option<u64> {
    let mut sum = 0.0;
    for (i, x) in events(cfg).take(cfg.n_max as usize).enumerate() {
        let n = i as u64 + 1;
        sum += x;
        let s = step(cfg, n, sum);
        if stopper.stops(n, s.w0, s.w1, s.ln_l) {
            return Some(n);
        }
    }
    None
}

/// Stopping times of `walks` walks sharing `template` except for their
/// stream index (walk `i` uses stream `i`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub schedule: Schedule,
    pub n_max: u64,
    pub stop_times: Vec<Option<u64>>,
}

/// Aggregate of a batch at some horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub schedule: String,
    pub walks: usize,
    pub n_max: u64,
    pub stop_fraction: Real,
    /// Mean stopping step over the walks that stopped; absent if none did.
    pub mean_stop_n: Option<Real>,
}

impl BatchResult {
    /// Summary as if the walks had been cut off at `n_max`, which is valid
    /// for any horizon up to the batch's own.
    pub fn summary_at(&self, n_max: u64) -> Result<BatchSummary> {
        if n_max > self.n_max {
            return Err(Error::domain(
                "summary_at",
                format!("horizon {n_max} exceeds the simulated {}", self.n_max),
            ));
        }
        let (count, total) = self
            .stop_times
            .iter()
            .flatten()
            .filter(|&&t| t <= n_max)
            .fold((0usize, 0u64), |(c, s), &t| (c + 1, s + t));
        let walks = self.stop_times.len();
        Ok(BatchSummary {
            schedule: self.schedule.label(),
            walks,
            n_max,
            stop_fraction: if walks == 0 { 0.0 } else { count as Real / walks as Real },
            mean_stop_n: (count > 0).then(|| total as Real / count as Real),
        })
    }

    pub fn summary(&self) -> BatchSummary {
        self.summary_at(self.n_max).expect("own horizon")
    }
}

/// Runs `walks` walks in parallel on the current rayon pool.
pub fn run_batch(template: &WalkConfig, walks: usize) -> Result<BatchResult> {
    template.validate()?;
    let stopper = Stopper::new(template.schedule, template.n_max)?;
    let stop_times = (0..walks as u64)
        .into_par_iter()
        .map(|i| {
            let cfg = WalkConfig {
                stream: i,
                ..*template
            };
            stop_time(&cfg, &stopper)
        })
        .collect();
    Ok(BatchResult {
        schedule: template.schedule,
        n_max: template.n_max,
        stop_times,
    })
}

/// A point of the iterated-logarithm boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LilPoint {
    pub n: u64,
    pub p0: Real,
    pub p1: Real,
}

/// Boundary traced across the fixed contours of a sample-mean test with
/// per-event separation `sep1 = Δμ/σ`; the contour at `n` has separation
/// `√n · sep1`. On the H0 side the boundary is `p0 = α_LIL(n)`, on the H1
/// side `p1 = α_LIL(n)`.
pub fn lil_boundary_points(sep1: Real, ns: &[u64], side: Hypothesis) -> Result<Vec<LilPoint>> {
    if !(sep1 > 0.0 && sep1.is_finite()) {
        return Err(Error::domain("lil_boundary_points", format!("separation must be positive, got {sep1}")));
    }
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        if n < 3 {
            return Err(Error::domain(
                "lil_boundary_points",
                format!("boundary needs n >= 3 (ln ln n <= 0 below), got {n}"),
            ));
        }
        let a = alpha_lil(n)?;
        let spec = ContourSpec::Gauss {
            sep: (n as Real).sqrt() * sep1,
        };
        let (p0, p1) = match side {
            Hypothesis::H0 => (a, fixed_contour(&spec, a)?),
            Hypothesis::H1 => (fixed_contour_p0(&spec, a)?, a),
        };
        out.push(LilPoint { n, p0, p1 });
    }
    Ok(out)
}
