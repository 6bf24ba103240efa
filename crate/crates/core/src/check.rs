//! Validation report: every closed form against its oracle, plus the bound
//! and gap invariants on the default sweep grid.

use serde::Serialize;

use crate::channel::{
    asymptotic_L, c_cnf, c_rcsi, entropy_gap_at_zero, entropy_gap_floor, h_y, h_y_given_x,
    lower_bound, mutual_information, ChannelParams, InfoPoint,
};
use crate::discrete::two_point_capacity;
use crate::oracle::{mc_mutual_info, numeric_h_y, numeric_h_y_given_x, numeric_output_mass};
use crate::quadrature::{half_range_moment, QuadratureRule, HALF_RANGE_MAX_ORDER};
use crate::special::{scaled_e1, CONSTANTS, EULER_GAMMA};
use crate::sweep::{db_grid, DEFAULT_SNR_DB_MAX, DEFAULT_SNR_DB_MIN, DEFAULT_SNR_DB_STEP};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub tol: f64,
    pub seed: u64,
    pub mc_samples: usize,
    /// SNRs (dB) at which the two-point capacity is compared.
    pub discrete_snr_db: Vec<f64>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            tol: 1e-9,
            seed: 42,
            mc_samples: 1_000_000,
            discrete_snr_db: vec![-10.0, 0.0, 10.0, 20.0, 30.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub reference: f64,
    pub bound: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub tol: f64,
    pub seed: u64,
    pub mc_samples: usize,
    pub passed: bool,
    pub checks: Vec<CheckItem>,
}

impl CheckReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `|value - reference| <= bound`.
fn close(name: String, value: f64, reference: f64, bound: f64) -> CheckItem {
    CheckItem {
        passed: (value - reference).abs() <= bound,
        detail: format!("|value - reference| = {:e}", (value - reference).abs()),
        name,
        value,
        reference,
        bound,
    }
}

/// `value <= limit` (bound is the slack already folded into `limit`).
fn at_most(name: String, value: f64, limit: f64, detail: String) -> CheckItem {
    CheckItem {
        passed: value <= limit,
        name,
        value,
        reference: limit,
        bound: 0.0,
        detail,
    }
}

fn at_least(name: String, value: f64, limit: f64, detail: String) -> CheckItem {
    CheckItem {
        passed: value >= limit,
        name,
        value,
        reference: limit,
        bound: 0.0,
        detail,
    }
}

fn moment_checks(out: &mut Vec<CheckItem>) -> Result<()> {
    for q in 1..=HALF_RANGE_MAX_ORDER {
        let rule = QuadratureRule::half_range(q)?;
        let mut worst = 0.0f64;
        let mut worst_k = 0;
        for k in 0..2 * q as u32 {
            let exact = half_range_moment(k);
            let approx = rule.apply(|t| t.powi(k as i32))?;
            let rel = ((approx - exact) / exact).abs();
            if rel > worst {
                worst = rel;
                worst_k = k;
            }
        }
        let bound = if q <= 10 { 1e-10 } else { 1e-8 };
        out.push(at_most(
            format!("half_range_moments_q{q}"),
            worst,
            bound,
            format!("worst relative moment error at k = {worst_k}"),
        ));
    }
    Ok(())
}

fn conditional_entropy_checks(out: &mut Vec<CheckItem>, tol: f64) -> Result<()> {
    for s in [0.1, 1.0, 10.0, 100.0] {
        let p = ChannelParams::new(s)?;
        let oracle = numeric_h_y_given_x(&p, tol)?;
        out.push(close(
            format!("h_y_given_x_vs_oracle_omega_sq_{s}"),
            h_y_given_x(&p),
            oracle.value,
            1e-8,
        ));
    }
    Ok(())
}

fn output_entropy_checks(out: &mut Vec<CheckItem>, rule: &QuadratureRule, tol: f64) -> Result<()> {
    for s in [0.01, 0.1, 1.0, 10.0, 100.0, 1000.0] {
        let p = ChannelParams::new(s)?;
        let oracle = numeric_h_y(&p, tol)?;
        out.push(close(
            format!("h_y_vs_oracle_omega_sq_{s}"),
            h_y(&p, rule, rule)?,
            oracle.value,
            1e-5,
        ));
        let mass = numeric_output_mass(&p, tol)?;
        out.push(close(
            format!("output_mass_omega_sq_{s}"),
            mass.value,
            1.0,
            1e-9,
        ));
    }
    Ok(())
}

fn grid_checks(out: &mut Vec<CheckItem>, rows: &[InfoPoint], zero: &InfoPoint) {
    let mut min_lb = f64::INFINITY;
    let mut min_margin = f64::INFINITY;
    let mut max_mi = f64::NEG_INFINITY;
    let mut max_gap = f64::NEG_INFINITY;
    let mut min_ratio = f64::INFINITY;
    let mut max_pct = f64::NEG_INFINITY;
    let mut worst_ratio_db = f64::NAN;
    for r in rows {
        min_lb = min_lb.min(r.lower_bound);
        min_margin = min_margin.min(r.mutual_info - r.lower_bound);
        max_mi = max_mi.max(r.mutual_info);
        max_gap = max_gap.max(r.gap_g);
        if r.mutual_info > 1e-4 {
            let ratio = r.lower_bound / r.mutual_info;
            if ratio < min_ratio {
                min_ratio = ratio;
                worst_ratio_db = r.snr_db;
            }
            max_pct = max_pct.max(100.0 * (1.0 - ratio));
        }
    }
    let n = rows.len();
    out.push(at_least(
        "grid_lower_bound_nonnegative".into(),
        min_lb,
        0.0,
        format!("minimum over {n} rows"),
    ));
    out.push(at_least(
        "grid_lower_bound_below_mi".into(),
        min_margin,
        0.0,
        format!("minimum of mi - lower_bound over {n} rows"),
    ));
    out.push(at_most(
        "grid_mi_below_euler_gamma".into(),
        max_mi,
        EULER_GAMMA + 1e-3,
        format!("maximum over {n} rows"),
    ));
    out.push(close(
        "zero_power_bound_equals_mi".into(),
        zero.lower_bound,
        zero.mutual_info,
        1e-9,
    ));
    out.push(at_most(
        "grid_gap_below_zero_power_gap".into(),
        max_gap,
        entropy_gap_at_zero(),
        format!("maximum over {n} rows"),
    ));
    out.push(at_least(
        "grid_bound_to_mi_ratio".into(),
        min_ratio,
        0.695,
        format!("minimum over rows with mi > 1e-4, attained at {worst_ratio_db} dB"),
    ));
    out.push(at_most(
        "grid_pct_lost_vs_mi".into(),
        max_pct,
        30.5,
        format!("maximum over rows with mi > 1e-4, attained at {worst_ratio_db} dB"),
    ));
}

fn asymptotic_checks(out: &mut Vec<CheckItem>, rule: &QuadratureRule) -> Result<()> {
    let big = ChannelParams::new(1e6)?;
    out.push(close(
        "capacity_difference_high_snr".into(),
        c_cnf(&big) - c_rcsi(&big),
        EULER_GAMMA,
        1e-3,
    ));
    out.push(close(
        "lower_bound_high_snr".into(),
        lower_bound(&big),
        0.5 * EULER_GAMMA,
        5e-4,
    ));
    let xi = 1e8f64;
    let bracket = 0.5 * (CONSTANTS.log_pi_e + xi.ln_1p() - scaled_e1(1.0 / xi)?);
    out.push(close(
        "high_snr_bracket_limit".into(),
        bracket,
        asymptotic_L(),
        1e-6,
    ));
    let g0 = 0.5 * CONSTANTS.log_pi_e + CONSTANTS.log_two - (1.0 + 0.5 * EULER_GAMMA);
    out.push(close(
        "gap_at_zero_power".into(),
        entropy_gap_at_zero(),
        g0,
        1e-9,
    ));
    for s in [1e4, 1e5, 1e6] {
        let p = ChannelParams::new(s)?;
        let point = InfoPoint::compute(&p, rule, rule)?;
        out.push(at_least(
            format!("gap_high_snr_omega_sq_{s}"),
            point.gap_g,
            entropy_gap_floor() - 1e-3,
            "floor minus 1e-3".into(),
        ));
    }
    Ok(())
}

fn discrete_checks(
    out: &mut Vec<CheckItem>,
    rule: &QuadratureRule,
    snr_db: &[f64],
    tol: f64,
) -> Result<()> {
    for &db in snr_db {
        let p = ChannelParams::from_db(db)?;
        let mi = mutual_information(&p, rule, rule)?.value;
        let cap = two_point_capacity(p.omega_sq(), tol)?;
        out.push(at_least(
            format!("two_point_capacity_above_mi_{db}_db"),
            cap.capacity,
            mi - 1e-4,
            format!("mi = {mi}"),
        ));
    }
    Ok(())
}

fn monte_carlo_check(
    out: &mut Vec<CheckItem>,
    rule: &QuadratureRule,
    n: usize,
    seed: u64,
) -> Result<()> {
    let p = ChannelParams::new(1.0)?;
    let mi = mutual_information(&p, rule, rule)?.value;
    let mc = mc_mutual_info(&p, n, seed)?;
    let mut item = close(
        "mc_mutual_info_omega_sq_1".into(),
        mc.value,
        mi,
        3.0 * mc.error_bound,
    );
    item.detail = format!("{}, standard error {:e}", item.detail, mc.error_bound);
    out.push(item);
    out.push(at_most(
        "mc_standard_error".into(),
        mc.error_bound,
        2e-3,
        format!("{n} samples"),
    ));
    Ok(())
}

/// Runs every check. Numerical failures (for instance an unreachable
/// tolerance) are returned as errors rather than failed checks.
pub fn run_checks(opts: &CheckOptions) -> Result<CheckReport> {
    let rule = QuadratureRule::half_range(HALF_RANGE_MAX_ORDER)?;
    let mut checks = Vec::new();

    moment_checks(&mut checks)?;
    conditional_entropy_checks(&mut checks, opts.tol)?;
    output_entropy_checks(&mut checks, &rule, opts.tol)?;

    let rows = db_grid(DEFAULT_SNR_DB_MIN, DEFAULT_SNR_DB_MAX, DEFAULT_SNR_DB_STEP)?
        .into_iter()
        .map(|s| InfoPoint::compute(&ChannelParams::new(s)?, &rule, &rule))
        .collect::<Result<Vec<_>>>()?;
    let zero = InfoPoint::compute(&ChannelParams::new(0.0)?, &rule, &rule)?;
    grid_checks(&mut checks, &rows, &zero);

    asymptotic_checks(&mut checks, &rule)?;
    discrete_checks(
        &mut checks,
        &rule,
        &opts.discrete_snr_db,
        opts.tol.max(1e-8),
    )?;
    monte_carlo_check(&mut checks, &rule, opts.mc_samples, opts.seed)?;

    Ok(CheckReport {
        schema_version: SCHEMA_VERSION,
        tol: opts.tol,
        seed: opts.seed,
        mc_samples: opts.mc_samples,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
