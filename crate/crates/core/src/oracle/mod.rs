//! Brute-force validators for the closed forms: nested adaptive integration
//! of the output entropy and a seeded Monte-Carlo mutual-information
//! estimator. Neither uses the quadrature-sum formulas of [`crate::channel`]
//! (the Monte-Carlo estimator only borrows the mixture density for `log p_Y`).

mod rng;

pub use rng::Xoshiro256StarStar;

use crate::channel::{ln_output_pdf, ChannelParams};
use crate::quadrature::{
    try_adaptive_integrate, try_adaptive_integrate_pieces, try_adaptive_integrate_truncated,
    OracleEstimate, QuadratureRule, DEFAULT_ENVELOPE,
};
use crate::special::EULER_GAMMA;
use crate::{Error, Result};

/// Inner (density) tolerance is this fraction of the outer tolerance.
pub const INNER_TOLERANCE_RATIO: f64 = 0.1;
/// Default truncation cutoff for the inner integral, as a fraction of its tolerance.
pub const DEFAULT_CUTOFF_FRACTION: f64 = 0.01;

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// `p_Y(y) = int_0^inf 2t e^{-t^2} (2y / a) e^{-y^2 / a} dt`, `a = 1 + omega_sq t^2`,
/// truncated where `exp(-t^2/2)` falls below `cutoff_fraction * tol`.
fn output_pdf_with_cutoff(
    y: f64,
    p: &ChannelParams,
    tol: f64,
    cutoff_fraction: f64,
) -> Result<OracleEstimate> {
    let s = p.omega_sq();
    let integrand = |t: f64| {
        let a = 1.0 + s * t * t;
        Ok(2.0 * t * (-t * t).exp() * 2.0 * y / a * (-y * y / a).exp())
    };
    // features of the integrand sit near t = 1/omega and t = y/omega
    let mut breaks = Vec::new();
    if s > 0.0 {
        let omega = s.sqrt();
        breaks.push(1.0 / omega);
        if y > 0.0 {
            breaks.push(y / omega);
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
    }
    try_adaptive_integrate_truncated(
        integrand,
        0.0,
        &breaks,
        DEFAULT_ENVELOPE,
        cutoff_fraction * tol,
        tol,
    )
}

/// Output magnitude density by direct adaptive integration over the input.
pub fn numeric_output_pdf(y: f64, p: &ChannelParams, tol: f64) -> Result<OracleEstimate> {
    check_tol(tol)?;
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::domain(format!(
            "y must be finite and nonnegative, got {y}"
        )));
    }
    output_pdf_with_cutoff(y, p, tol, DEFAULT_CUTOFF_FRACTION)
}

/// Runs `f` over `y in [0, inf)` after rescaling `y = sigma z`, with
/// `sigma = sqrt(1 + omega_sq)` the output RMS amplitude.
fn integrate_over_output<F>(p: &ChannelParams, tol: f64, mut f: F) -> Result<OracleEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let sigma = (1.0 + p.omega_sq()).sqrt();
    let mut points = vec![0.0];
    if 1.0 / sigma < 0.5 {
        points.push(1.0 / sigma);
    }
    points.push(1.0);
    points.push(f64::INFINITY);
    let est = try_adaptive_integrate_pieces(|z| Ok(sigma * f(sigma * z)?), &points, tol)?;
    Ok(est)
}

/// `int_0^inf p_Y(y) dy`, which must be 1.
pub fn numeric_output_mass(p: &ChannelParams, tol: f64) -> Result<OracleEstimate> {
    check_tol(tol)?;
    let inner_tol = tol * INNER_TOLERANCE_RATIO;
    let mut inner_err = 0.0f64;
    let mut est = integrate_over_output(p, tol, |y| {
        let e = output_pdf_with_cutoff(y, p, inner_tol, DEFAULT_CUTOFF_FRACTION)?;
        inner_err = inner_err.max(e.error_bound);
        Ok(e.value)
    })?;
    est.error_bound += inner_err;
    Ok(est)
}

/// Output entropy `h(Y) = -int p_Y ln p_Y` by nested adaptive integration.
pub fn numeric_h_y(p: &ChannelParams, tol: f64) -> Result<OracleEstimate> {
    numeric_h_y_with_cutoff(p, tol, DEFAULT_CUTOFF_FRACTION)
}

/// [`numeric_h_y`] with an explicit truncation cutoff (fraction of the inner
/// tolerance) for the inner density integral.
pub fn numeric_h_y_with_cutoff(
    p: &ChannelParams,
    tol: f64,
    cutoff_fraction: f64,
) -> Result<OracleEstimate> {
    check_tol(tol)?;
    let inner_tol = tol * INNER_TOLERANCE_RATIO;
    let mut inner_evals = 0u64;
    let mut est = integrate_over_output(p, tol, |y| {
        let e = output_pdf_with_cutoff(y, p, inner_tol, cutoff_fraction)?;
        inner_evals += e.evaluations;
        Ok(if e.value > 0.0 {
            -e.value * e.value.ln()
        } else {
            0.0
        })
    })?;
    // propagate the density error: |d(-p ln p)| = |1 + ln p| |dp|
    let propagated = integrate_over_output(p, tol.max(1e-8), |y| {
        let e = output_pdf_with_cutoff(y, p, inner_tol, cutoff_fraction)?;
        inner_evals += e.evaluations;
        // the integrand is positive, so the density error never exceeds the density
        Ok(if e.value > 0.0 {
            e.error_bound.min(e.value) * (1.0 + e.value.ln()).abs()
        } else {
            0.0
        })
    })?;
    est.error_bound += propagated.value.abs() + propagated.error_bound;
    est.evaluations += inner_evals;
    Ok(est)
}

/// Conditional output entropy from its defining integral
/// `int (x / omega_sq) e^{-x^2/omega_sq} ln(1 + x^2) dx - ln 2 + 1 + gamma/2`,
/// integrated in `z = x / omega`.
pub fn numeric_h_y_given_x(p: &ChannelParams, tol: f64) -> Result<OracleEstimate> {
    check_tol(tol)?;
    let constant = 1.0 + 0.5 * EULER_GAMMA - std::f64::consts::LN_2;
    if p.is_zero_power() {
        return Ok(OracleEstimate {
            value: constant,
            error_bound: 0.0,
            evaluations: 0,
        });
    }
    let s = p.omega_sq();
    let mut est = try_adaptive_integrate(
        |z| {
            let g = (-z * z).exp();
            Ok(if g == 0.0 {
                0.0
            } else {
                z * g * (s * z * z).ln_1p()
            })
        },
        0.0,
        f64::INFINITY,
        tol,
    )?;
    est.value += constant;
    Ok(est)
}

/// Monte-Carlo estimate of `I(X;Y)` for the Gaussian input:
/// `x = omega sqrt(-ln U)`, `y = sqrt(1 + x^2) sqrt(-ln U')`, averaging
/// `ln p(y|x) - ln p_Y(y)` with `p_Y` from the order-15 mixture. The error
/// bound is one standard error. Deterministic for a given seed.
pub fn mc_mutual_info(p: &ChannelParams, n: usize, seed: u64) -> Result<OracleEstimate> {
    if p.is_zero_power() {
        return Err(Error::domain(
            "mutual information is identically zero at zero power",
        ));
    }
    if n < 1000 {
        return Err(Error::invalid(format!(
            "need at least 1000 samples, got {n}"
        )));
    }
    let rule = QuadratureRule::half_range(15)?;
    let omega = p.omega_sq().sqrt();
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..n {
        let x = omega * (-rng.next_open01().ln()).sqrt();
        let a = 1.0 + x * x;
        let y = a.sqrt() * (-rng.next_open01().ln()).sqrt();
        let ln_cond = (2.0 * y / a).ln() - y * y / a;
        let sample = ln_cond - ln_output_pdf(y, p, &rule)?;
        let delta = sample - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (sample - mean);
    }
    let var = m2 / (n - 1) as f64;
    Ok(OracleEstimate {
        value: mean,
        error_bound: (var / n as f64).sqrt(),
        evaluations: n as u64,
    })
}
