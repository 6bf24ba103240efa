//! Gaussian rules for the weight `exp(-t^2)` and an adaptive integrator.
//!
//! Half-range rules (on `[0, inf)`) have no closed-form recurrence, so they are
//! built from the moments `mu_k = Gamma((k+1)/2) / 2`: the Hankel moment matrix
//! is Cholesky-factorised in double-double arithmetic, the recurrence
//! coefficients are read off the factor, and the nodes are the eigenvalues of
//! the resulting Jacobi matrix (Golub-Welsch). Full-range rules use the known
//! Hermite recurrence.

mod adaptive;
mod dd;
mod tridiag;

pub(crate) use adaptive::try_adaptive_integrate_pieces;
pub use adaptive::{
    adaptive_integrate, adaptive_integrate_truncated, try_adaptive_integrate,
    try_adaptive_integrate_truncated, DEFAULT_ENVELOPE, MAX_EVALUATIONS, MIN_TOLERANCE,
};

use serde::Serialize;

use crate::special::ln_gamma_half_integer;
use crate::{Error, Result};
use dd::Dd;

/// Largest half-range order: beyond it the moment route runs out of precision.
pub const HALF_RANGE_MAX_ORDER: usize = 15;
/// Largest full-range order.
pub const FULL_RANGE_MAX_ORDER: usize = 30;

#[allow(clippy::excessive_precision)]
const SQRT_PI: Dd = Dd {
    hi: 1.772_453_850_905_516,
    lo: -7.666_586_499_825_799e-17,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleDomain {
    /// Weight `exp(-t^2)` on `[0, inf)`.
    HalfRange,
    /// Weight `exp(-t^2)` on `(-inf, inf)`.
    FullRange,
}

/// Nodes and positive weights of a Gaussian rule. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    domain: RuleDomain,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// A value produced by a brute-force method, with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub evaluations: u64,
}

/// `mu_k = int_0^inf t^k exp(-t^2) dt = Gamma((k+1)/2) / 2`.
pub fn half_range_moment(k: u32) -> f64 {
    0.5 * ln_gamma_half_integer(k).exp()
}

/// Same moment in double-double, exact up to the last bit of `sqrt(pi)`.
fn half_range_moment_dd(k: usize) -> Dd {
    let m = k / 2;
    if k % 2 == 1 {
        // m! / 2, exact in f64 for m <= 18
        let fact: f64 = (1..=m).map(|j| j as f64).product();
        Dd::from_f64(fact * 0.5)
    } else {
        // sqrt(pi) (2m-1)!! / 2^(m+1), the double factorial is exact for m <= 15
        let dfact: f64 = (0..m).map(|j| (2 * j + 1) as f64).product();
        SQRT_PI * Dd::from_f64(dfact / 2f64.powi(m as i32 + 1))
    }
}

/// Recurrence coefficients `(alpha_k, sqrt(beta_{k+1}))` of the monic orthogonal
/// polynomials for the half-range weight, from the Cholesky factor of the
/// `(q+1) x (q+1)` Hankel moment matrix.
fn half_range_recurrence(q: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = q + 1;
    let mu: Vec<Dd> = (0..2 * n - 1).map(half_range_moment_dd).collect();
    let mut r = vec![vec![Dd::ZERO; n]; n];
    for i in 0..n {
        let mut diag = mu[2 * i];
        for row in r.iter().take(i) {
            diag = diag - row[i] * row[i];
        }
        if diag.hi <= 0.0 || !diag.hi.is_finite() {
            return Err(Error::convergence(format!(
                "Hankel moment matrix lost positive definiteness at row {i} (order {q})"
            )));
        }
        let rii = diag.sqrt();
        r[i][i] = rii;
        for j in i + 1..n {
            let mut s = mu[i + j];
            for row in r.iter().take(i) {
                s = s - row[i] * row[j];
            }
            r[i][j] = s / rii;
        }
    }
    let mut alpha = Vec::with_capacity(q);
    let mut off = Vec::with_capacity(q.saturating_sub(1));
    for k in 0..q {
        let mut a = r[k][k + 1] / r[k][k];
        if k > 0 {
            a = a - r[k - 1][k] / r[k - 1][k - 1];
        }
        alpha.push(a.to_f64());
        if k + 1 < q {
            off.push((r[k + 1][k + 1] / r[k][k]).to_f64());
        }
    }
    Ok((alpha, off))
}

/// Golub-Welsch from a Jacobi matrix. Weights are `mu0 * v_0^2` for the
/// normalised eigenvectors, evaluated through the orthonormal-polynomial form
/// `v_0^2 = 1 / (mu0 * sum_k p_k(x)^2)`, which keeps tiny tail weights accurate.
fn gauss_from_jacobi(mu0: f64, alpha: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut nodes = tridiag::symmetric_tridiagonal_eigenvalues(alpha, off)?;
    nodes.sort_by(f64::total_cmp);
    let q = alpha.len();
    let weights = nodes
        .iter()
        .map(|&x| {
            let mut prev = 0.0;
            let mut cur = 1.0 / mu0.sqrt();
            let mut sum = cur * cur;
            for k in 0..q - 1 {
                let back = if k == 0 { 0.0 } else { off[k - 1] * prev };
                let next = ((x - alpha[k]) * cur - back) / off[k];
                prev = cur;
                cur = next;
                sum += cur * cur;
            }
            1.0 / sum
        })
        .collect();
    Ok((nodes, weights))
}

impl QuadratureRule {
    /// Gaussian rule of order `q` (1..=15) for `exp(-t^2)` on `[0, inf)`.
    pub fn half_range(q: usize) -> Result<Self> {
        if !(1..=HALF_RANGE_MAX_ORDER).contains(&q) {
            return Err(Error::invalid(format!(
                "half-range order must be in 1..={HALF_RANGE_MAX_ORDER}, got {q}"
            )));
        }
        let mu0 = half_range_moment(0);
        let (nodes, weights) = if q == 1 {
            (vec![half_range_moment(1) / mu0], vec![mu0])
        } else {
            let (alpha, off) = half_range_recurrence(q)?;
            gauss_from_jacobi(mu0, &alpha, &off)?
        };
        Self::validated(RuleDomain::HalfRange, nodes, weights)
    }

    /// Classical Gauss-Hermite rule of order `q` (1..=30) on `(-inf, inf)`.
    pub fn full_range(q: usize) -> Result<Self> {
        if !(1..=FULL_RANGE_MAX_ORDER).contains(&q) {
            return Err(Error::invalid(format!(
                "full-range order must be in 1..={FULL_RANGE_MAX_ORDER}, got {q}"
            )));
        }
        let mu0 = std::f64::consts::PI.sqrt();
        let alpha = vec![0.0; q];
        let off: Vec<f64> = (1..q).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let (mut nodes, weights) = if q == 1 {
            (vec![0.0], vec![mu0])
        } else {
            gauss_from_jacobi(mu0, &alpha, &off)?
        };
        if q % 2 == 1 {
            nodes[q / 2] = 0.0;
        }
        Self::validated(RuleDomain::FullRange, nodes, weights)
    }

    fn validated(domain: RuleDomain, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let increasing = nodes.windows(2).all(|w| w[0] < w[1]);
        let positive_nodes = domain == RuleDomain::FullRange || nodes.iter().all(|&v| v > 0.0);
        let positive_weights = weights.iter().all(|&w| w > 0.0 && w.is_finite());
        if !(increasing && positive_nodes && positive_weights) {
            return Err(Error::convergence(format!(
                "rule of order {} failed its structural checks",
                nodes.len()
            )));
        }
        Ok(QuadratureRule {
            domain,
            nodes,
            weights,
        })
    }

    pub fn domain(&self) -> RuleDomain {
        self.domain
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(node, weight)` pairs in increasing node order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `sum_j w_j f(v_j)`.
    pub fn apply<F: FnMut(f64) -> f64>(&self, mut f: F) -> Result<f64> {
        let mut sum = 0.0;
        for (v, w) in self.iter() {
            let fv = f(v);
            if fv.is_nan() {
                return Err(Error::evaluation(format!("integrand is NaN at node {v}")));
            }
            sum += w * fv;
        }
        Ok(sum)
    }
}

pub fn half_range_hermite_rule(q: usize) -> Result<QuadratureRule> {
    QuadratureRule::half_range(q)
}

pub fn full_range_hermite_rule(q: usize) -> Result<QuadratureRule> {
    QuadratureRule::full_range(q)
}

pub fn apply_rule<F: FnMut(f64) -> f64>(rule: &QuadratureRule, f: F) -> Result<f64> {
    rule.apply(f)
}
