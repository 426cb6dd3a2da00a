//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Infinite limits are mapped onto finite intervals before subdivision.
//! The interval with the largest error estimate is always split next.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_9,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_489_0,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

/// Tolerances and work limit for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Scalar> Default for QuadOptions<T> {
    fn default() -> Self {
        QuadOptions {
            abs_tol: T::zero(),
            rel_tol: T::c(1e-10),
            max_intervals: 4000,
        }
    }
}

impl<T: Scalar> QuadOptions<T> {
    pub fn with_rel_tol(rel_tol: T) -> Self {
        QuadOptions {
            rel_tol,
            ..Self::default()
        }
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod<T: Scalar, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Segment<T> {
    let half = (b - a) * T::c(0.5);
    let center = (a + b) * T::c(0.5);
    let fc = f(center);
    let mut resk = fc * T::c(WGK[7]);
    let mut resg = fc * T::c(WG[3]);
    for j in 0..7 {
        let dx = half * T::c(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        resk = resk + s * T::c(WGK[j]);
        if j % 2 == 1 {
            resg = resg + s * T::c(WG[j / 2]);
        }
    }
    let value = resk * half;
    let error = ((resk - resg) * half).abs();
    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]`; either limit may be infinite.
pub fn integrate<T, F>(mut f: F, a: T, b: T, opts: QuadOptions<T>) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if a.is_nan() || b.is_nan() {
        return Err(Error::domain("integrate", "NaN limit"));
    }
    if a == b {
        return Ok(QuadResult {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
        });
    }
    if a > b {
        let r = integrate(f, b, a, opts)?;
        return Ok(QuadResult {
            value: -r.value,
            ..r
        });
    }
    let one = T::one();
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(&mut f, a, b, opts),
        (true, false) => {
            // x = a + t / (1 - t)
            let g = |t: T| {
                let u = one - t;
                let v = f(a + t / u);
                if v == T::zero() { v } else { v / (u * u) }
            };
            adaptive(&mut mask_nonfinite(g), T::zero(), one, opts)
        }
        (false, true) => {
            // x = b - t / (1 - t)
            let g = |t: T| {
                let u = one - t;
                let v = f(b - t / u);
                if v == T::zero() { v } else { v / (u * u) }
            };
            adaptive(&mut mask_nonfinite(g), T::zero(), one, opts)
        }
        (false, false) => {
            // x = t / (1 - t²)
            let g = |t: T| {
                let u = one - t * t;
                let v = f(t / u);
                if v == T::zero() { v } else { v * (one + t * t) / (u * u) }
            };
            adaptive(&mut mask_nonfinite(g), -one, one, opts)
        }
    }
}

/// Integrates over `[a, b]` split at the given interior points, which helps
/// when the integrand has kinks or narrow peaks there.
pub fn integrate_with_breaks<T, F>(
    mut f: F,
    a: T,
    b: T,
    breaks: &[T],
    opts: QuadOptions<T>,
) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let mut pts: Vec<T> = breaks.iter().copied().filter(|&p| p > a && p < b).collect();
    pts.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    pts.dedup();
    let mut edges = Vec::with_capacity(pts.len() + 2);
    edges.push(a);
    edges.extend(pts);
    edges.push(b);
    let mut total = QuadResult {
        value: T::zero(),
        error: T::zero(),
        evaluations: 0,
    };
    for w in edges.windows(2) {
        let r = integrate(&mut f, w[0], w[1], opts)?;
        total.value = total.value + r.value;
        total.error = total.error + r.error;
        total.evaluations += r.evaluations;
    }
    Ok(total)
}

// Endpoint singularities of the maps evaluate to ∞·0; integrands we use decay there.
fn mask_nonfinite<T: Scalar>(mut g: impl FnMut(T) -> T) -> impl FnMut(T) -> T {
    move |t| {
        let v = g(t);
        if v.is_finite() { v } else { T::zero() }
    }
}

fn adaptive<T, F>(f: &mut F, a: T, b: T, opts: QuadOptions<T>) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let mut segs = vec![kronrod(f, a, b)];
    let mut evaluations = 15;
    loop {
        let value = segs.iter().fold(T::zero(), |s, g| s + g.value);
        let error = segs.iter().fold(T::zero(), |s, g| s + g.error);
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target || error <= T::c(50.0) * T::epsilon() * value.abs() {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
            });
        }
        if !value.is_finite() {
            return Err(Error::Degenerate("integrand is not finite".into()));
        }
        if segs.len() >= opts.max_intervals {
            return Err(Error::Convergence {
                func: "integrate",
                iterations: segs.len(),
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, g)| {
                if g.error > be { (i, g.error) } else { (bi, be) }
            });
        let seg = segs.swap_remove(worst);
        let mid = (seg.a + seg.b) * T::c(0.5);
        if mid <= seg.a || mid >= seg.b {
            // Interval can no longer be split; accept its contribution.
            segs.push(Segment { error: T::zero(), ..seg });
            continue;
        }
        segs.push(kronrod(f, seg.a, mid));
        segs.push(kronrod(f, mid, seg.b));
        evaluations += 30;
    }
}
