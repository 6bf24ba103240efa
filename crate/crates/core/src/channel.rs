//! Densities, entropies and capacities of the non-coherent Rayleigh channel.
//!
//! The channel acts on magnitudes: given input magnitude `x`, the output
//! magnitude `y` is Rayleigh with `E[y^2] = 1 + x^2`. A complex-Gaussian input
//! makes `x` itself Rayleigh with `E[x^2] = omega_sq`. All results are in nats.
//!
//! The output entropy is evaluated with two half-range Gauss-Hermite rules.
//! Substituting `x = omega t` in the output density gives the finite mixture
//!
//! ```text
//! p_Y(y) ~= sum_j w_j 2 v_j (2y / a_j) exp(-y^2 / a_j),   a_j = 1 + omega_sq v_j^2
//! ```
//!
//! and substituting `y = s sqrt(a_l)` in each mixture component turns
//! `-int p_Y log p_Y` into a second Gauss-Hermite sum over the inner nodes.

use serde::Serialize;

use crate::quadrature::{QuadratureRule, RuleDomain};
use crate::special::{scaled_e1, CONSTANTS, EULER_GAMMA};
use crate::{Error, Result};

/// Average input power `omega_sq = E[|x|^2]`. With unit fading and noise
/// variance this is also the SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    omega_sq: f64,
}

impl ChannelParams {
    pub fn new(omega_sq: f64) -> Result<Self> {
        if !omega_sq.is_finite() || omega_sq < 0.0 {
            return Err(Error::domain(format!(
                "input power must be finite and nonnegative, got {omega_sq}"
            )));
        }
        Ok(ChannelParams { omega_sq })
    }

    /// From an SNR in dB, `omega_sq = 10^(snr_db / 10)`.
    pub fn from_db(snr_db: f64) -> Result<Self> {
        Self::new(10f64.powf(snr_db / 10.0))
    }

    pub fn omega_sq(&self) -> f64 {
        self.omega_sq
    }

    /// `10 log10(omega_sq)`; `-inf` at zero power.
    pub fn snr_db(&self) -> f64 {
        10.0 * self.omega_sq.log10()
    }

    pub fn is_zero_power(&self) -> bool {
        self.omega_sq == 0.0
    }
}

/// `1 + gamma/2 - ln 2`: the entropy of the unit-power Rayleigh magnitude.
pub fn rayleigh_entropy_unit() -> f64 {
    1.0 + 0.5 * EULER_GAMMA - CONSTANTS.log_two
}

fn check_magnitude(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::domain(format!(
            "{name} must be finite and nonnegative, got {v}"
        )));
    }
    Ok(())
}

fn check_half_range(rule: &QuadratureRule) -> Result<()> {
    if rule.domain() != RuleDomain::HalfRange {
        return Err(Error::invalid("a half-range rule is required"));
    }
    Ok(())
}

/// Rayleigh density with `E[y^2] = scale`.
#[inline]
fn rayleigh(y: f64, scale: f64) -> f64 {
    2.0 * y / scale * (-y * y / scale).exp()
}

/// `p(y | x) = (2y / (1 + x^2)) exp(-y^2 / (1 + x^2))`.
pub fn cond_pdf_y_given_x(y: f64, x: f64) -> Result<f64> {
    check_magnitude("y", y)?;
    check_magnitude("x", x)?;
    Ok(rayleigh(y, 1.0 + x * x))
}

/// Rayleigh input magnitude density `(2x / omega_sq) exp(-x^2 / omega_sq)`.
pub fn rayleigh_input_pdf(x: f64, p: &ChannelParams) -> Result<f64> {
    check_magnitude("x", x)?;
    if p.is_zero_power() {
        return Err(Error::domain(
            "zero input power makes the input a point mass at the origin",
        ));
    }
    Ok(rayleigh(x, p.omega_sq))
}

/// Output magnitude density as a `q`-component Rayleigh mixture.
pub fn output_pdf(y: f64, p: &ChannelParams, rule: &QuadratureRule) -> Result<f64> {
    check_magnitude("y", y)?;
    check_half_range(rule)?;
    if p.is_zero_power() {
        return Ok(rayleigh(y, 1.0));
    }
    Ok(rule
        .iter()
        .map(|(v, w)| w * 2.0 * v * rayleigh(y, 1.0 + p.omega_sq * v * v))
        .sum())
}

/// Natural log of [`output_pdf`], computed as a log-sum-exp so it stays finite
/// far in the tail.
pub fn ln_output_pdf(y: f64, p: &ChannelParams, rule: &QuadratureRule) -> Result<f64> {
    check_magnitude("y", y)?;
    check_half_range(rule)?;
    if y == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p.is_zero_power() {
        return Ok((2.0 * y).ln() - y * y);
    }
    let terms: Vec<f64> = rule
        .iter()
        .map(|(v, w)| {
            let a = 1.0 + p.omega_sq * v * v;
            (w * 4.0 * v * y / a).ln() - y * y / a
        })
        .collect();
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln())
}

/// Capacity with perfect receiver CSI, `-e^{1/snr} Ei(-1/snr)`.
pub fn c_rcsi(p: &ChannelParams) -> f64 {
    if p.is_zero_power() {
        return 0.0;
    }
    scaled_e1(1.0 / p.omega_sq).expect("1/omega_sq is positive and finite")
}

/// Capacity of the non-fading complex Gaussian channel, `ln(1 + omega_sq)`.
pub fn c_cnf(p: &ChannelParams) -> f64 {
    p.omega_sq.ln_1p()
}

/// Conditional output entropy `h(Y|X) = C_rcsi / 2 - ln 2 + 1 + gamma/2`.
pub fn h_y_given_x(p: &ChannelParams) -> f64 {
    0.5 * c_rcsi(p) + rayleigh_entropy_unit()
}

/// Output entropy `h(Y)` from an outer (mixture) rule and an inner rule.
///
/// The `log(2y)` factor of every mixture component is integrated exactly
/// (`int 2s e^{-s^2} ln s ds = -gamma/2`), so the inner rule only sees the
/// smooth remainder of the log-density.
pub fn h_y(p: &ChannelParams, outer: &QuadratureRule, inner: &QuadratureRule) -> Result<f64> {
    check_half_range(outer)?;
    check_half_range(inner)?;
    if p.is_zero_power() {
        return Ok(rayleigh_entropy_unit());
    }
    let scales: Vec<f64> = outer
        .nodes()
        .iter()
        .map(|v| 1.0 + p.omega_sq * v * v)
        .collect();
    // coefficient of each mixture component after pulling out 2y
    let coef: Vec<f64> = outer
        .iter()
        .zip(&scales)
        .map(|((v, w), a)| 2.0 * w * v / a)
        .collect();
    let mut total = 0.0;
    for ((vl, wl), &al) in outer.iter().zip(&scales) {
        let mut inner_sum = 0.0;
        for (u, wi) in inner.iter() {
            let u2 = u * u;
            // log of sum_j coef_j sqrt(al) exp(-u^2 al / a_j), via log-sum-exp
            let exps: Vec<f64> = coef
                .iter()
                .zip(&scales)
                .map(|(c, aj)| (c * al.sqrt()).ln() - u2 * al / aj)
                .collect();
            let m = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let log_mix = m + exps.iter().map(|e| (e - m).exp()).sum::<f64>().ln();
            inner_sum += 2.0 * wi * u * (log_mix + 2f64.ln());
        }
        total += 2.0 * wl * vl * inner_sum;
    }
    // the log(s) part: sum_l 2 w_l v_l int 2 s e^{-s^2} ln s ds
    let mixture_mass: f64 = outer.iter().map(|(v, w)| 2.0 * w * v).sum();
    Ok(-total + 0.5 * EULER_GAMMA * mixture_mass)
}

/// Mutual information with a flag set when a slightly negative quadrature
/// result was clamped to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutualInformation {
    pub value: f64,
    pub clamped: bool,
}

/// Values in `(-NEGATIVE_SLACK, 0)` are treated as quadrature noise.
pub const NEGATIVE_SLACK: f64 = 1e-9;

pub(crate) fn clamp_mi(raw: f64) -> Result<MutualInformation> {
    if raw >= 0.0 {
        Ok(MutualInformation {
            value: raw,
            clamped: false,
        })
    } else if raw > -NEGATIVE_SLACK {
        Ok(MutualInformation {
            value: 0.0,
            clamped: true,
        })
    } else {
        Err(Error::evaluation(format!(
            "mutual information came out negative ({raw:e})"
        )))
    }
}

/// `I(X;Y) = h(Y) - h(Y|X)` for the complex-Gaussian input.
pub fn mutual_information(
    p: &ChannelParams,
    outer: &QuadratureRule,
    inner: &QuadratureRule,
) -> Result<MutualInformation> {
    if p.is_zero_power() {
        return Ok(MutualInformation {
            value: 0.0,
            clamped: false,
        });
    }
    clamp_mi(h_y(p, outer, inner)? - h_y_given_x(p))
}

/// Analytical lower bound `(C_cnf - C_rcsi) / 2` on the Gaussian-input
/// mutual information.
pub fn lower_bound(p: &ChannelParams) -> f64 {
    0.5 * (c_cnf(p) - c_rcsi(p))
}

/// Non-fading output and conditional entropies
/// `(ln(pi e (1 + omega_sq)) / 2, ln(pi e) / 2)`.
pub fn nonfading_entropies(p: &ChannelParams) -> (f64, f64) {
    let cond = 0.5 * CONSTANTS.log_pi_e;
    (cond + 0.5 * c_cnf(p), cond)
}

/// Entropy gap `G = h_nf(Y) - h(Y)`.
pub fn entropy_gap(
    p: &ChannelParams,
    outer: &QuadratureRule,
    inner: &QuadratureRule,
) -> Result<f64> {
    Ok(nonfading_entropies(p).0 - h_y(p, outer, inner)?)
}

/// Gap at zero power, `ln(pi e)/2 + ln 2 - (1 + gamma/2)`.
pub fn entropy_gap_at_zero() -> f64 {
    0.5 * CONSTANTS.log_pi_e - rayleigh_entropy_unit()
}

/// High-power floor of the gap, `ln(2 sqrt(pi e)) - (1 + gamma)`.
pub fn entropy_gap_floor() -> f64 {
    CONSTANTS.log_two + 0.5 * CONSTANTS.log_pi_e - (1.0 + EULER_GAMMA)
}

/// `L = (gamma + ln(pi e)) / 2`, the limit of
/// `(ln(pi e (1 + xi)) + e^{1/xi} Ei(-1/xi)) / 2` as `xi -> inf`.
#[allow(non_snake_case)]
pub fn asymptotic_L() -> f64 {
    0.5 * (EULER_GAMMA + CONSTANTS.log_pi_e)
}

/// One row of an SNR sweep, all entropies in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfoPoint {
    pub omega_sq: f64,
    pub snr_db: f64,
    pub h_y: f64,
    pub h_y_given_x: f64,
    pub mutual_info: f64,
    pub mi_clamped: bool,
    pub c_rcsi: f64,
    pub c_cnf: f64,
    pub lower_bound: f64,
    pub gap_g: f64,
    pub h_y_nf: f64,
    pub h_y_given_x_nf: f64,
}

impl InfoPoint {
    pub fn compute(
        p: &ChannelParams,
        outer: &QuadratureRule,
        inner: &QuadratureRule,
    ) -> Result<Self> {
        let h_y = h_y(p, outer, inner)?;
        let h_y_given_x = h_y_given_x(p);
        let mi = if p.is_zero_power() {
            MutualInformation {
                value: 0.0,
                clamped: false,
            }
        } else {
            clamp_mi(h_y - h_y_given_x)?
        };
        let (h_y_nf, h_y_given_x_nf) = nonfading_entropies(p);
        Ok(InfoPoint {
            omega_sq: p.omega_sq(),
            snr_db: p.snr_db(),
            h_y,
            h_y_given_x,
            mutual_info: mi.value,
            mi_clamped: mi.clamped,
            c_rcsi: c_rcsi(p),
            c_cnf: c_cnf(p),
            lower_bound: lower_bound(p),
            gap_g: h_y_nf - h_y,
            h_y_nf,
            h_y_given_x_nf,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule15() -> QuadratureRule {
        QuadratureRule::half_range(15).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ChannelParams::new(-1.0).is_err());
        assert!(ChannelParams::new(f64::NAN).is_err());
        assert!(ChannelParams::new(f64::INFINITY).is_err());
        let p = ChannelParams::from_db(10.0).unwrap();
        assert!((p.omega_sq() - 10.0).abs() < 1e-12);
        assert_eq!(ChannelParams::new(0.0).unwrap().snr_db(), f64::NEG_INFINITY);
    }

    #[test]
    fn conditional_density() {
        for &y in &[0.0, 0.3, 1.7] {
            let v = cond_pdf_y_given_x(y, 0.0).unwrap();
            assert!((v - 2.0 * y * (-y * y).exp()).abs() < 1e-15);
        }
        assert!(cond_pdf_y_given_x(-0.1, 1.0).is_err());
        assert!(cond_pdf_y_given_x(1.0, f64::NAN).is_err());
        // mode at sqrt((1 + x^2) / 2)
        let mode = 0.5f64.sqrt();
        let at = cond_pdf_y_given_x(mode, 0.0).unwrap();
        for d in [-1e-3, 1e-3] {
            assert!(cond_pdf_y_given_x(mode + d, 0.0).unwrap() < at);
        }
    }

    #[test]
    fn input_density() {
        let p = ChannelParams::new(1.0).unwrap();
        let v = rayleigh_input_pdf(1.0, &p).unwrap();
        assert!((v - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!(rayleigh_input_pdf(1.0, &ChannelParams::new(0.0).unwrap()).is_err());
    }

    #[test]
    fn output_density_zero_power() {
        let p = ChannelParams::new(0.0).unwrap();
        let r = rule15();
        for &y in &[0.1, 1.0, 2.5] {
            assert_eq!(output_pdf(y, &p, &r).unwrap(), 2.0 * y * (-y * y).exp());
        }
        assert!(output_pdf(-1.0, &p, &r).is_err());
        let full = QuadratureRule::full_range(4).unwrap();
        assert!(output_pdf(1.0, &p, &full).is_err());
    }

    #[test]
    fn log_density_matches() {
        let r = rule15();
        for &s in &[0.0, 0.5, 30.0] {
            let p = ChannelParams::new(s).unwrap();
            for &y in &[0.05, 1.0, 4.0] {
                let a = output_pdf(y, &p, &r).unwrap().ln();
                let b = ln_output_pdf(y, &p, &r).unwrap();
                assert!((a - b).abs() < 1e-12, "{s} {y}");
            }
        }
    }

    #[test]
    fn capacities() {
        let zero = ChannelParams::new(0.0).unwrap();
        assert_eq!(c_rcsi(&zero), 0.0);
        assert_eq!(c_cnf(&zero), 0.0);
        let one = ChannelParams::new(1.0).unwrap();
        assert!((c_cnf(&one) - std::f64::consts::LN_2).abs() < 1e-15);
        let em1 = ChannelParams::new(std::f64::consts::E - 1.0).unwrap();
        assert!((c_cnf(&em1) - 1.0).abs() < 1e-15);
        let big = ChannelParams::new(1e6).unwrap();
        // ln s - gamma plus the first correction (1 + ln s - gamma) / s
        assert!((c_rcsi(&big) - 13.238309131365).abs() < 1e-9);
        let leading = 1e6f64.ln() - EULER_GAMMA;
        assert!((c_rcsi(&big) - leading - (1.0 + leading) / 1e6).abs() < 1e-10);
    }

    #[test]
    fn conditional_entropy_identity() {
        let k = 1.0 - std::f64::consts::LN_2 + 0.5 * EULER_GAMMA;
        for i in 0..50 {
            let s = 10f64.powf(-4.0 + 10.0 * i as f64 / 49.0);
            let p = ChannelParams::new(s).unwrap();
            assert!((h_y_given_x(&p) - 0.5 * c_rcsi(&p) - k).abs() < 1e-12);
        }
        let zero = ChannelParams::new(0.0).unwrap();
        assert!((h_y_given_x(&zero) - 0.595_460_651_890_821).abs() < 1e-14);
    }

    #[test]
    fn zero_power_everything_collapses() {
        let r = rule15();
        let p = ChannelParams::new(0.0).unwrap();
        assert!((h_y(&p, &r, &r).unwrap() - h_y_given_x(&p)).abs() < 1e-15);
        assert_eq!(mutual_information(&p, &r, &r).unwrap().value, 0.0);
        assert_eq!(lower_bound(&p), 0.0);
        let (a, b) = nonfading_entropies(&p);
        assert_eq!(a, b);
        assert!((a - 1.072_364_942_925).abs() < 1e-12);
    }

    #[test]
    fn gap_constants() {
        assert!((entropy_gap_at_zero() - 0.476_904_291_033_879).abs() < 1e-14);
        assert!((entropy_gap_floor() - 0.188_296_458_583_113).abs() < 1e-14);
        let via_l = asymptotic_L() - EULER_GAMMA + CONSTANTS.log_two - (1.0 + EULER_GAMMA / 2.0);
        assert!((via_l - entropy_gap_floor()).abs() < 1e-15);
        assert!((asymptotic_L() - 1.360_972_775_375_467).abs() < 1e-14);
    }

    #[test]
    fn h_y_increasing() {
        let r = rule15();
        let h = |s: f64| h_y(&ChannelParams::new(s).unwrap(), &r, &r).unwrap();
        assert!(h(10.0) > h(1.0) && h(1.0) > h(0.1));
    }

    #[test]
    fn clamp_behaviour() {
        assert_eq!(
            clamp_mi(-1e-12).unwrap(),
            MutualInformation {
                value: 0.0,
                clamped: true
            }
        );
        assert!(!clamp_mi(1e-3).unwrap().clamped);
        assert!(clamp_mi(-1e-6).is_err());
    }

    #[test]
    fn nonfading_difference_is_half_cnf() {
        for s in [0.0, 0.3, 7.0, 1e4] {
            let p = ChannelParams::new(s).unwrap();
            let (a, b) = nonfading_entropies(&p);
            assert!((a - b - 0.5 * c_cnf(&p)).abs() < 1e-14);
        }
    }
}
