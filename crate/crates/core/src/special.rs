//! Scalar special functions used by the closed forms.

use crate::{Error, Result};

/// Euler-Mascheroni constant, stored to 20 significant digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// `ln(pi)`.
#[allow(clippy::excessive_precision)]
pub const LN_PI: f64 = 1.144_729_885_849_400_174_14;

/// Recurring constants of the entropy expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathConstants {
    pub euler_gamma: f64,
    pub log_two: f64,
    /// `ln(pi e) = 1 + ln(pi)`.
    pub log_pi_e: f64,
}

impl MathConstants {
    pub const fn new() -> Self {
        MathConstants {
            euler_gamma: EULER_GAMMA,
            log_two: std::f64::consts::LN_2,
            log_pi_e: 1.0 + LN_PI,
        }
    }
}

impl Default for MathConstants {
    fn default() -> Self {
        Self::new()
    }
}

pub const CONSTANTS: MathConstants = MathConstants::new();

const SERIES_CUTOVER: f64 = 1.0;
const TERM_TOL: f64 = 1e-16;
const MAX_TERMS: usize = 500;

/// Exponential integral `Ei(x) = -int_{-x}^inf e^{-t}/t dt` for `x < 0`.
///
/// Uses the convergent power series for `|x| <= 1` and a continued fraction
/// (modified Lentz) beyond. For `x < -745` the result underflows to `-0.0`.
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    if !x.is_finite() || x >= 0.0 {
        return Err(Error::domain(format!(
            "exp_integral_ei needs a finite negative argument, got {x}"
        )));
    }
    let z = -x;
    if z <= SERIES_CUTOVER {
        Ok(-e1_series(z)?)
    } else {
        Ok(-(e1_continued_fraction(z)? * (-z).exp()))
    }
}

/// `e^x E1(x) = -e^x Ei(-x)` for `x > 0`, evaluated without forming `e^x`
/// separately, so it stays finite for large `x` (where it behaves like `1/x`).
pub fn scaled_e1(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!(
            "scaled_e1 needs a finite positive argument, got {x}"
        )));
    }
    if x <= SERIES_CUTOVER {
        Ok(x.exp() * e1_series(x)?)
    } else {
        e1_continued_fraction(x)
    }
}

/// `E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)`.
fn e1_series(z: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..=MAX_TERMS {
        let kf = k as f64;
        term *= -z / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.abs() < TERM_TOL * sum.abs().max(f64::MIN_POSITIVE) {
            return Ok(-EULER_GAMMA - z.ln() - sum);
        }
    }
    Err(Error::convergence(format!(
        "E1 power series did not converge at z = {z}"
    )))
}

/// Continued fraction for `e^z E1(z) = 1/(z+1- 1/(z+3- 4/(z+5- ...)))`.
fn e1_continued_fraction(z: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_TERMS {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() <= TERM_TOL.max(f64::EPSILON) {
            return Ok(h);
        }
    }
    Err(Error::convergence(format!(
        "E1 continued fraction did not converge at z = {z}"
    )))
}

/// `ln Gamma((k+1)/2)`, exact up to rounding of the accumulated logs.
pub fn ln_gamma_half_integer(k: u32) -> f64 {
    // Gamma(m + 1/2) = sqrt(pi) prod_{j<m} (j + 1/2),  Gamma(m + 1) = m!
    let m = k / 2;
    if k.is_multiple_of(2) {
        0.5 * LN_PI + (0..m).map(|j| (j as f64 + 0.5).ln()).sum::<f64>()
    } else {
        (1..=m).map(|j| (j as f64).ln()).sum()
    }
}

/// Largest Hermite degree accepted by [`hermite_poly`].
pub const HERMITE_MAX_DEGREE: u32 = 64;

/// Physicists' Hermite polynomial `H_q(x)` by the three-term recurrence.
pub fn hermite_poly(q: u32, x: f64) -> Result<f64> {
    if q > HERMITE_MAX_DEGREE {
        return Err(Error::invalid(format!(
            "Hermite degree {q} exceeds the limit {HERMITE_MAX_DEGREE}"
        )));
    }
    let mut prev = 1.0;
    if q == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * x;
    for n in 1..q {
        let next = 2.0 * x * cur - 2.0 * n as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert!((EULER_GAMMA - 0.5772156649015329).abs() < 1e-16);
        let c = MathConstants::default();
        assert!((c.log_pi_e - (1.0 + std::f64::consts::PI.ln())).abs() < 1e-15);
        assert_eq!(c.log_two, std::f64::consts::LN_2);
    }

    #[test]
    fn ei_rejects_bad_arguments() {
        for x in [0.0, 1.0, f64::NAN, f64::NEG_INFINITY] {
            assert!(matches!(exp_integral_ei(x), Err(Error::Domain(_))), "{x}");
        }
        assert!(scaled_e1(0.0).is_err());
    }

    #[test]
    fn ei_small_argument_expansion() {
        let x: f64 = 1e-6;
        let v = exp_integral_ei(-x).unwrap();
        assert!((v - (EULER_GAMMA + x.ln() - x)).abs() < 1e-12);
    }

    #[test]
    fn ei_underflows_to_zero() {
        for x in [-746.0, -1e4, -1e300] {
            let v = exp_integral_ei(x).unwrap();
            assert_eq!(v, 0.0);
            assert!(v.is_sign_negative());
        }
    }

    #[test]
    fn branches_agree_at_cutover() {
        let lo = e1_series(SERIES_CUTOVER).unwrap() * SERIES_CUTOVER.exp();
        let hi = e1_continued_fraction(SERIES_CUTOVER).unwrap();
        assert!((lo - hi).abs() / hi < 1e-13, "{lo} {hi}");
    }

    #[test]
    fn ei_strictly_decreasing() {
        let mut prev = 0.0;
        for i in 0..1000 {
            let x = -30.0 + 30.0 * (i as f64 + 0.5) / 1000.0;
            let v = exp_integral_ei(x).unwrap();
            assert!(v < 0.0);
            assert!(i == 0 || v < prev, "not decreasing at {x}");
            prev = v;
        }
    }

    #[test]
    fn scaled_e1_increasing_in_snr() {
        let mut prev = 0.0;
        for i in 0..1000 {
            let s = 10f64.powf(-3.0 + 9.0 * i as f64 / 999.0);
            let v = scaled_e1(1.0 / s).unwrap();
            assert!(v > prev, "at snr {s}");
            prev = v;
        }
    }

    #[test]
    fn ln_gamma_anchors() {
        assert!((ln_gamma_half_integer(0) - 0.5723649429247001).abs() < 1e-15);
        assert_eq!(ln_gamma_half_integer(1), 0.0);
        let g52 = 3.0 * std::f64::consts::PI.sqrt() / 4.0;
        assert!((ln_gamma_half_integer(4) - g52.ln()).abs() < 1e-15);
        // Gamma(z+1) = z Gamma(z)
        for k in 0..60u32 {
            let z = (k as f64 + 1.0) / 2.0;
            let lhs = ln_gamma_half_integer(k + 2);
            let rhs = z.ln() + ln_gamma_half_integer(k);
            assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn hermite_low_orders() {
        assert_eq!(hermite_poly(0, 12.3).unwrap(), 1.0);
        assert_eq!(hermite_poly(1, 3.5).unwrap(), 7.0);
        assert_eq!(hermite_poly(2, 1.0).unwrap(), 2.0);
        for &x in &[-2.1, -0.3, 0.0, 0.7, 1.9] {
            let x2 = x * x;
            let explicit = [
                1.0,
                2.0 * x,
                4.0 * x2 - 2.0,
                8.0 * x2 * x - 12.0 * x,
                16.0 * x2 * x2 - 48.0 * x2 + 12.0,
            ];
            for (q, e) in explicit.iter().enumerate() {
                let h = hermite_poly(q as u32, x).unwrap();
                assert!((h - e).abs() < 1e-12 * e.abs().max(1.0));
            }
        }
        assert!(hermite_poly(65, 0.1).is_err());
        assert!(hermite_poly(64, 0.1).is_ok());
    }
}
