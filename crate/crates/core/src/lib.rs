//! Mutual information of the memoryless non-coherent Rayleigh fading channel
//! `y = a x + n` driven by a complex-Gaussian input.
//!
//! Everything is expressed in nats, with unit fading and noise variance, so
//! the average input power `omega_sq` equals the SNR. The crate provides:
//!
//! * [`special`]: the exponential integral, Euler's constant and friends;
//! * [`quadrature`]: half-range and full-range Gauss-Hermite rules built from
//!   moments (Golub-Welsch), and an adaptive Gauss-Kronrod integrator;
//! * [`channel`]: densities, entropies, capacities, the mutual information in
//!   quadrature form, and the analytical lower bound;
//! * [`discrete`]: mutual information of finite input distributions and the
//!   two-mass-point capacity used as a comparison curve;
//! * [`oracle`]: brute-force nested integration and a seeded Monte-Carlo
//!   estimator used to validate the closed forms;
//! * [`sweep`] and [`check`]: the data behind the `rayleigh-mi` CLI.
//!
//! ```
//! use rayleigh_mi::channel::{self, ChannelParams};
//! use rayleigh_mi::quadrature::QuadratureRule;
//!
//! let rule = QuadratureRule::half_range(15).unwrap();
//! let p = ChannelParams::new(1.0).unwrap();
//! let mi = channel::mutual_information(&p, &rule, &rule).unwrap().value;
//! assert!(channel::lower_bound(&p) <= mi);
//! ```

// `!(x > 0.0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod check;
pub mod discrete;
mod error;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod sweep;

pub use error::{Error, Result};
