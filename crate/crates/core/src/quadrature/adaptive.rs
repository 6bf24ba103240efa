//! Globally adaptive 7/15-point Gauss-Kronrod integration.
//!
//! A semi-infinite upper limit `[a, inf)` is mapped onto `(0, 1]` with
//! `t = a + (1 - s) / s`. Alternatively the caller can truncate the range where
//! an analytic envelope of the integrand drops below a cutoff.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::OracleEstimate;
use crate::{Error, Result};

/// Evaluation budget for a single call.
pub const MAX_EVALUATIONS: u64 = 1_000_000;
/// Smallest absolute tolerance accepted; tighter requests cannot be met in f64.
pub const MIN_TOLERANCE: f64 = 1e-14;

/// Default truncation envelope `exp(-t^2 / 2)`.
pub const DEFAULT_ENVELOPE: fn(f64) -> f64 = |t| (-0.5 * t * t).exp();

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// `t = origin + (1 - s) / s`, `dt = ds / s^2`
    Tail {
        origin: f64,
    },
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    lo: f64,
    hi: f64,
    map: Map,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        e = res_asc * (200.0 * e / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

struct Engine<F> {
    f: F,
    evaluations: u64,
}

impl<F: FnMut(f64) -> Result<f64>> Engine<F> {
    fn eval(&mut self, s: f64, map: Map) -> Result<f64> {
        self.evaluations += 1;
        let v = match map {
            Map::Identity => (self.f)(s)?,
            Map::Tail { origin } => {
                let t = origin + (1.0 - s) / s;
                let ft = (self.f)(t)?;
                if ft == 0.0 {
                    0.0
                } else {
                    ft / (s * s)
                }
            }
        };
        if v.is_nan() {
            return Err(Error::evaluation(format!("integrand is NaN at {s}")));
        }
        Ok(v)
    }

    fn kronrod(&mut self, lo: f64, hi: f64, map: Map) -> Result<Interval> {
        let center = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let fc = self.eval(center, map)?;
        let mut res_g = fc * WG[3];
        let mut res_k = fc * WGK[7];
        let mut res_abs = res_k.abs();
        let mut fv1 = [0.0; 7];
        let mut fv2 = [0.0; 7];
        for j in 0..7 {
            let dx = half * XGK[j];
            let f1 = self.eval(center - dx, map)?;
            let f2 = self.eval(center + dx, map)?;
            fv1[j] = f1;
            fv2[j] = f2;
            res_k += WGK[j] * (f1 + f2);
            res_abs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                res_g += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * res_k;
        let mut res_asc = WGK[7] * (fc - mean).abs();
        for j in 0..7 {
            res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
        }
        let value = res_k * half;
        let err = (res_k - res_g) * half;
        let error = rescale_error(err, res_abs * half.abs(), res_asc * half.abs());
        if !value.is_finite() {
            return Err(Error::convergence(format!(
                "partial integral on [{lo:e}, {hi:e}] diverges"
            )));
        }
        Ok(Interval {
            lo,
            hi,
            map,
            value,
            error,
        })
    }
}

fn check_tolerance(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if tol < MIN_TOLERANCE {
        return Err(Error::convergence(format!(
            "tolerance {tol:e} is below the attainable floor {MIN_TOLERANCE:e}"
        )));
    }
    Ok(())
}

/// Integrate over consecutive pieces `points[0]..points[1]..points[n]`; the
/// last point may be `+inf`.
fn integrate_pieces<F>(f: F, points: &[f64], tol: f64) -> Result<OracleEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_tolerance(tol)?;
    if points.len() < 2 {
        return Err(Error::invalid("need at least two integration limits"));
    }
    for w in points.windows(2) {
        if !(w[0] < w[1]) || w[0].is_infinite() || w[0].is_nan() {
            return Err(Error::invalid(format!(
                "integration limits must be finite and increasing (upper may be +inf): {points:?}"
            )));
        }
    }
    let mut engine = Engine { f, evaluations: 0 };
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        let iv = if w[1] == f64::INFINITY {
            engine.kronrod(0.0, 1.0, Map::Tail { origin: w[0] })?
        } else {
            engine.kronrod(w[0], w[1], Map::Identity)?
        };
        heap.push(iv);
    }

    let mut total_err: f64 = heap.iter().map(|iv| iv.error).sum();
    loop {
        if total_err <= tol {
            // the running sum drifts; confirm before accepting
            total_err = heap.iter().map(|iv| iv.error).sum();
        }
        if total_err <= tol {
            let mut parts: Vec<f64> = heap.iter().map(|iv| iv.value).collect();
            parts.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
            return Ok(OracleEstimate {
                value: parts.iter().sum(),
                error_bound: total_err,
                evaluations: engine.evaluations,
            });
        }
        if engine.evaluations + 30 > MAX_EVALUATIONS {
            return Err(Error::convergence(format!(
                "adaptive integration exceeded {MAX_EVALUATIONS} evaluations \
                 (error estimate {total_err:e}, tolerance {tol:e})"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            return Err(Error::convergence(format!(
                "interval around {mid} cannot be subdivided further \
                 (error estimate {total_err:e}, tolerance {tol:e})"
            )));
        }
        let left = engine.kronrod(worst.lo, mid, worst.map)?;
        let right = engine.kronrod(mid, worst.hi, worst.map)?;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

/// Integrate a fallible `f` over `[a, b]`; `b` may be `+inf`. The first error
/// returned by `f` aborts the integration.
pub fn try_adaptive_integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<OracleEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_pieces(f, &[a, b], tol)
}

/// Integrate `f` over `[a, b]` (`b` may be `+inf`) to absolute tolerance `tol`.
pub fn adaptive_integrate<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<OracleEstimate>
where
    F: FnMut(f64) -> f64,
{
    integrate_pieces(|t| Ok(f(t)), &[a, b], tol)
}

/// Integrate over `[a, inf)` by truncating at the first `T` with
/// `envelope(T) < cutoff`. `interior` breakpoints below `T` are honoured. The
/// reported error bound includes `envelope(T)` as the tail allowance.
pub fn try_adaptive_integrate_truncated<F, E>(
    f: F,
    a: f64,
    interior: &[f64],
    envelope: E,
    cutoff: f64,
    tol: f64,
) -> Result<OracleEstimate>
where
    F: FnMut(f64) -> Result<f64>,
    E: Fn(f64) -> f64,
{
    check_tolerance(tol)?;
    if !(cutoff > 0.0) || cutoff >= tol {
        return Err(Error::invalid(format!(
            "truncation cutoff must lie in (0, tol), got {cutoff:e}"
        )));
    }
    let (mut lo, mut hi) = (a, a + 1.0);
    let mut doublings = 0;
    while envelope(hi) >= cutoff {
        lo = hi;
        hi = a + 2.0 * (hi - a);
        doublings += 1;
        if doublings > 1000 || !hi.is_finite() {
            return Err(Error::convergence(
                "truncation envelope never drops below the cutoff",
            ));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if envelope(mid) < cutoff {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let upper = hi;
    let mut points = vec![a];
    points.extend(interior.iter().copied().filter(|&p| p > a && p < upper));
    points.push(upper);
    let mut est = integrate_pieces(f, &points, tol - envelope(upper))?;
    est.error_bound += envelope(upper);
    Ok(est)
}

pub fn adaptive_integrate_truncated<F, E>(
    mut f: F,
    a: f64,
    envelope: E,
    cutoff: f64,
    tol: f64,
) -> Result<OracleEstimate>
where
    F: FnMut(f64) -> f64,
    E: Fn(f64) -> f64,
{
    try_adaptive_integrate_truncated(|t| Ok(f(t)), a, &[], envelope, cutoff, tol)
}

/// Integrate over the consecutive pieces defined by `points` (the last one
/// may be `+inf`), sharing one global error budget.
pub(crate) fn try_adaptive_integrate_pieces<F>(
    f: F,
    points: &[f64],
    tol: f64,
) -> Result<OracleEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_pieces(f, points, tol)
}
