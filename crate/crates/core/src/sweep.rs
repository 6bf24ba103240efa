//! SNR sweeps: one [`SweepRow`] per grid value, CSV/JSON serialisation.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{ChannelParams, InfoPoint};
use crate::discrete::{two_point_capacity, TwoPointCapacity};
use crate::quadrature::QuadratureRule;
use crate::{Error, Result};

/// Frozen CSV column order.
pub const CSV_HEADER: [&str; 15] = [
    "snr_db",
    "omega_sq",
    "h_y",
    "h_y_given_x",
    "mi_gauss_nats",
    "mi_gauss_bits",
    "lower_bound",
    "c_rcsi",
    "c_cnf",
    "cap_discrete2",
    "gap_g",
    "h_y_nf",
    "h_y_given_x_nf",
    "pct_lost_vs_mi",
    "pct_lost_vs_cap",
];

pub const DEFAULT_SNR_DB_MIN: f64 = -10.0;
pub const DEFAULT_SNR_DB_MAX: f64 = 35.0;
pub const DEFAULT_SNR_DB_STEP: f64 = 0.5;
pub const DEFAULT_ORDER: usize = 15;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Linear input powers, in output order.
    pub omegas: Vec<f64>,
    pub quad_order: usize,
    pub inner_order: usize,
    pub with_discrete: bool,
    pub tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            omegas: db_grid(DEFAULT_SNR_DB_MIN, DEFAULT_SNR_DB_MAX, DEFAULT_SNR_DB_STEP)
                .expect("default grid is valid"),
            quad_order: DEFAULT_ORDER,
            inner_order: DEFAULT_ORDER,
            with_discrete: false,
            tol: DEFAULT_TOL,
        }
    }
}

/// Linear powers `10^(db/10)` for `db = min, min + step, ..., max`.
pub fn db_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || !(step > 0.0) || min > max {
        return Err(Error::invalid(format!(
            "bad dB grid: min {min}, max {max}, step {step}"
        )));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n)
        .map(|i| 10f64.powf((min + step * i as f64) / 10.0))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(flatten)]
    pub point: InfoPoint,
    pub mi_gauss_bits: f64,
    pub cap_discrete2: Option<f64>,
    pub discrete_optimum: Option<TwoPointCapacity>,
    pub pct_lost_vs_mi: f64,
    pub pct_lost_vs_cap: Option<f64>,
}

/// `100 (1 - bound / reference)`, with `0/0` reported as 0.
fn pct_lost(bound: f64, reference: f64) -> f64 {
    if reference > 0.0 {
        100.0 * (1.0 - bound / reference)
    } else {
        0.0
    }
}

pub fn compute_row(
    p: &ChannelParams,
    outer: &QuadratureRule,
    inner: &QuadratureRule,
    with_discrete: bool,
    tol: f64,
) -> Result<SweepRow> {
    let point = InfoPoint::compute(p, outer, inner)?;
    let discrete = if with_discrete {
        if p.is_zero_power() {
            None
        } else {
            Some(two_point_capacity(p.omega_sq(), tol)?)
        }
    } else {
        None
    };
    let cap = match (&discrete, with_discrete) {
        (Some(d), _) => Some(d.capacity),
        (None, true) => Some(0.0),
        (None, false) => None,
    };
    Ok(SweepRow {
        mi_gauss_bits: point.mutual_info / std::f64::consts::LN_2,
        pct_lost_vs_mi: pct_lost(point.lower_bound, point.mutual_info),
        pct_lost_vs_cap: cap.map(|c| pct_lost(point.lower_bound, c)),
        cap_discrete2: cap,
        discrete_optimum: discrete,
        point,
    })
}

/// Rows computed so far, and the error that stopped the sweep, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub error: Option<Error>,
}

/// Runs the sweep. Rows are computed in parallel and returned in grid order;
/// on failure, the rows before the first failing grid point are kept.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let outer = QuadratureRule::half_range(cfg.quad_order)?;
    let inner = QuadratureRule::half_range(cfg.inner_order)?;
    let params = cfg
        .omegas
        .iter()
        .map(|&w| ChannelParams::new(w))
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<Result<SweepRow>> = params
        .par_iter()
        .map(|p| compute_row(p, &outer, &inner, cfg.with_discrete, cfg.tol))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                return Ok(SweepOutcome {
                    rows,
                    error: Some(e),
                })
            }
        }
    }
    Ok(SweepOutcome { rows, error: None })
}

/// 15 significant digits; plain decimal for moderate magnitudes, scientific
/// otherwise. Non-finite values print as `inf`, `-inf`, `nan`.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .expect("scientific format has an exponent");
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp) as usize, x)
    } else {
        sci
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

pub fn write_csv_header<W: Write>(w: &mut W) -> io::Result<()> {
    writeln!(w, "{}", CSV_HEADER.join(","))
}

pub fn write_csv_row<W: Write>(w: &mut W, row: &SweepRow) -> io::Result<()> {
    let p = &row.point;
    let fields = [
        format_number(p.snr_db),
        format_number(p.omega_sq),
        format_number(p.h_y),
        format_number(p.h_y_given_x),
        format_number(p.mutual_info),
        format_number(row.mi_gauss_bits),
        format_number(p.lower_bound),
        format_number(p.c_rcsi),
        format_number(p.c_cnf),
        opt(row.cap_discrete2),
        format_number(p.gap_g),
        format_number(p.h_y_nf),
        format_number(p.h_y_given_x_nf),
        format_number(row.pct_lost_vs_mi),
        opt(row.pct_lost_vs_cap),
    ];
    writeln!(w, "{}", fields.join(","))
}

pub fn write_csv<W: Write>(w: &mut W, rows: &[SweepRow]) -> io::Result<()> {
    write_csv_header(w)?;
    for row in rows {
        write_csv_row(w, row)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let g = db_grid(-10.0, 35.0, 0.5).unwrap();
        assert_eq!(g.len(), 91);
        assert!((g[0] - 0.1).abs() < 1e-15);
        assert!((g[90] - 10f64.powf(3.5)).abs() < 1e-9);
        assert!(db_grid(0.0, 1.0, 0.0).is_err());
        assert!(db_grid(1.0, 0.0, 0.5).is_err());
        assert_eq!(db_grid(3.0, 3.0, 1.0).unwrap().len(), 1);
    }

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.5641895835477563), "0.564189583547756");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_number(-10.0), "-10.0000000000000");
        assert_eq!(format_number(9.562_291_451_848_75e-14), "9.56229145184875e-14");
        assert_eq!(format_number(3162.2776601683795), "3162.27766016838");
    }

    #[test]
    fn zero_power_row() {
        let r = QuadratureRule::half_range(15).unwrap();
        let p = ChannelParams::new(0.0).unwrap();
        let row = compute_row(&p, &r, &r, true, 1e-9).unwrap();
        assert_eq!(row.point.mutual_info, 0.0);
        assert_eq!(row.point.lower_bound, 0.0);
        assert_eq!(row.pct_lost_vs_mi, 0.0);
        assert_eq!(row.cap_discrete2, Some(0.0));
        assert_eq!(row.pct_lost_vs_cap, Some(0.0));
        let mut buf = Vec::new();
        write_csv(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        assert!(line.starts_with("-inf,0,"));
        assert_eq!(line.split(',').count(), 15);
    }
}
