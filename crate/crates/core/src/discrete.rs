//! Mutual information of finite input magnitude distributions, and the
//! best two-mass-point input (one point at the origin) under a power budget.

use serde::Serialize;

use crate::channel::{clamp_mi, rayleigh_entropy_unit};
use crate::quadrature::try_adaptive_integrate_pieces;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassPoint {
    pub amplitude: f64,
    pub probability: f64,
}

/// Finite input distribution on magnitudes; amplitudes strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteInput {
    points: Vec<MassPoint>,
}

const PROBABILITY_SLACK: f64 = 1e-12;

impl DiscreteInput {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a discrete input needs at least one point"));
        }
        for &(x, p) in &points {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::domain(format!(
                    "amplitude {x} is not a nonnegative number"
                )));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::domain(format!("probability {p} is outside [0, 1]")));
            }
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::invalid("amplitudes must be strictly increasing"));
        }
        let total: f64 = points.iter().map(|p| p.1).sum();
        if (total - 1.0).abs() > PROBABILITY_SLACK {
            return Err(Error::domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(DiscreteInput {
            points: points
                .into_iter()
                .map(|(amplitude, probability)| MassPoint {
                    amplitude,
                    probability,
                })
                .collect(),
        })
    }

    /// `{(0, 1 - p), (x1, p)}`.
    pub fn on_off(x1: f64, p: f64) -> Result<Self> {
        if x1 == 0.0 {
            return Self::new(vec![(0.0, 1.0)]);
        }
        Self::new(vec![(0.0, 1.0 - p), (x1, p)])
    }

    pub fn points(&self) -> &[MassPoint] {
        &self.points
    }

    /// `sum_k p_k x_k^2`.
    pub fn power(&self) -> f64 {
        self.points
            .iter()
            .map(|m| m.probability * m.amplitude * m.amplitude)
            .sum()
    }

    fn active(&self) -> impl Iterator<Item = &MassPoint> {
        self.points.iter().filter(|m| m.probability > 0.0)
    }

    /// Output magnitude density `sum_k p_k p(y | x_k)`.
    pub fn output_pdf(&self, y: f64) -> f64 {
        self.active()
            .map(|m| {
                let a = 1.0 + m.amplitude * m.amplitude;
                m.probability * 2.0 * y / a * (-y * y / a).exp()
            })
            .sum()
    }

    /// `h(Y|X) = sum_k p_k ln(1 + x_k^2) / 2 + 1 + gamma/2 - ln 2`.
    pub fn conditional_entropy(&self) -> f64 {
        let spread: f64 = self
            .active()
            .map(|m| m.probability * 0.5 * (m.amplitude * m.amplitude).ln_1p())
            .sum();
        spread + rayleigh_entropy_unit()
    }
}

/// `I(X;Y)` for a discrete input; `h(Y)` is integrated adaptively to `tol`.
pub fn discrete_mi(d: &DiscreteInput, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if d.active().count() == 1 {
        return Ok(0.0);
    }
    // geometric breaks spanning every component's scale, so no bump can hide
    // between the Kronrod nodes of a wide piece
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for m in d.active() {
        let scale = (1.0 + m.amplitude * m.amplitude).sqrt();
        lo = lo.min(scale);
        hi = hi.max(scale);
    }
    let mut points = vec![0.0];
    let mut b = 0.25 * lo;
    while b < 4.0 * hi {
        points.push(b);
        b *= 2.0;
    }
    points.push(f64::INFINITY);
    let h = try_adaptive_integrate_pieces(
        |y| {
            let p = d.output_pdf(y);
            Ok(if p > 0.0 { -p * p.ln() } else { 0.0 })
        },
        &points,
        tol,
    )?;
    Ok(clamp_mi(h.value - d.conditional_entropy())?.value)
}

/// Result of the two-point search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPointCapacity {
    pub input: DiscreteInput,
    pub capacity: f64,
    /// `power / budget` at the optimum; 1 when the constraint is active.
    pub power_fraction: f64,
}

const GRID_AMPLITUDES: usize = 33;
const GRID_FRACTIONS: usize = 9;
const GOLDEN: f64 = 0.618_033_988_749_894_8;
const MAX_SWEEPS: usize = 40;

/// Search state: `ln p` and the fraction `rho = p x1^2 / budget` of the
/// budget spent, so that `x1 = sqrt(rho budget / p)` and `rho = 1` is the
/// active-constraint branch. At fixed `p` the objective grows with power,
/// which keeps the coordinate search off the ridge that `(x1, rho)` has.
struct Objective {
    budget: f64,
    tol: f64,
}

impl Objective {
    fn input(&self, ln_p: f64, rho: f64) -> Result<DiscreteInput> {
        let p = ln_p.exp().min(1.0);
        DiscreteInput::on_off((rho * self.budget / p).sqrt(), p)
    }

    fn eval(&self, ln_p: f64, rho: f64) -> Result<f64> {
        discrete_mi(&self.input(ln_p, rho)?, self.tol)
    }
}

/// Golden-section maximisation of `f` on `[lo, hi]`; returns `(arg, value)`.
fn golden_max<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
) -> Result<(f64, f64)> {
    let mut b = hi - GOLDEN * (hi - lo);
    let mut c = lo + GOLDEN * (hi - lo);
    let mut fb = f(b)?;
    let mut fc = f(c)?;
    for _ in 0..200 {
        if (hi - lo).abs() <= xtol {
            break;
        }
        if fb >= fc {
            hi = c;
            c = b;
            fc = fb;
            b = hi - GOLDEN * (hi - lo);
            fb = f(b)?;
        } else {
            lo = b;
            b = c;
            fb = fc;
            c = lo + GOLDEN * (hi - lo);
            fc = f(c)?;
        }
    }
    Ok(if fb >= fc { (b, fb) } else { (c, fc) })
}

/// Maximise the mutual information over `{(0, 1-p), (x1, p)}` with
/// `p x1^2 <= power_budget`: a coarse grid over `x1` in
/// `[0.01, 100] sqrt(budget)` and over the spent power fraction, then
/// coordinate-wise golden-section refinement.
pub fn two_point_capacity(power_budget: f64, tol: f64) -> Result<TwoPointCapacity> {
    if !(power_budget > 0.0) || !power_budget.is_finite() {
        return Err(Error::domain(format!(
            "power budget must be positive and finite, got {power_budget}"
        )));
    }
    let obj = Objective {
        budget: power_budget,
        tol,
    };
    let grid_tol = tol.max(1e-8);
    let coarse = Objective {
        budget: power_budget,
        tol: grid_tol,
    };
    let ln_x_lo = (0.01 * power_budget.sqrt()).ln();
    let ln_x_step = (4.0 * std::f64::consts::LN_10) / (GRID_AMPLITUDES - 1) as f64;
    // fractions 1, 1/2, 1/4, ... probe interior power
    let fractions: Vec<f64> = (0..GRID_FRACTIONS).map(|k| 0.5f64.powi(k as i32)).collect();

    let mut best = (0.0, 1.0, f64::NEG_INFINITY);
    for i in 0..GRID_AMPLITUDES {
        let x1 = (ln_x_lo + ln_x_step * i as f64).exp();
        for &rho in &fractions {
            let ln_p = (rho * power_budget / (x1 * x1)).min(1.0).ln();
            let v = coarse.eval(ln_p, rho)?;
            if v > best.2 {
                best = (ln_p, rho, v);
            }
        }
    }

    // one amplitude grid step moves ln p by twice as much
    let half_width = 2.0 * ln_x_step;
    let ln_p_min = (0.5f64.powi(GRID_FRACTIONS as i32 - 1) * 1e-4).ln();
    let (mut ln_p, mut rho, _) = best;
    let mut value = obj.eval(ln_p, rho)?;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let before = value;
        let lo = (ln_p - half_width).max(ln_p_min);
        let hi = (ln_p + half_width).min(0.0);
        let (p_new, v_new) = golden_max(|l| obj.eval(l, rho), lo, hi, 1e-7)?;
        if v_new > value {
            ln_p = p_new;
            value = v_new;
        }
        let (r_new, v_new) = golden_max(
            |r| obj.eval(ln_p, r),
            (0.5 * rho).max(1e-9),
            (2.0 * rho).min(1.0),
            1e-7,
        )?;
        if v_new > value {
            rho = r_new;
            value = v_new;
        }
        // the edge of the fraction interval is part of the feasible set
        let edge = obj.eval(ln_p, 1.0)?;
        if edge > value {
            rho = 1.0;
            value = edge;
        }
        if (value - before).abs() <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::convergence(
            "two-point refinement did not settle within the sweep limit",
        ));
    }
    let input = obj.input(ln_p, rho)?;
    let capacity = discrete_mi(&input, tol)?;
    Ok(TwoPointCapacity {
        power_fraction: input.power() / power_budget,
        input,
        capacity,
    })
}
