//! C interface to `rayleigh-mi`.
//!
//! Every function returns an [`RmiStatus`] and writes results through out
//! pointers. On failure, [`rmi_last_error_message`] describes the last error
//! on the calling thread. Quadrature rules are opaque [`RmiRule`] handles
//! created by `rmi_rule_*` and released with [`rmi_rule_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rayleigh_mi::channel::{self, ChannelParams, InfoPoint};
use rayleigh_mi::quadrature::QuadratureRule;
use rayleigh_mi::special;
use rayleigh_mi::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmiStatus {
    Ok = 0,
    Domain = 1,
    InvalidArgument = 2,
    Convergence = 3,
    Evaluation = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Opaque quadrature rule.
pub struct RmiRule(QuadratureRule);

/// Mirror of one sweep row; entropies in nats.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmiInfoPoint {
    pub omega_sq: f64,
    pub snr_db: f64,
    pub h_y: f64,
    pub h_y_given_x: f64,
    pub mutual_info: f64,
    /// Nonzero when a slightly negative mutual information was clamped to 0.
    pub mi_clamped: i32,
    pub c_rcsi: f64,
    pub c_cnf: f64,
    pub lower_bound: f64,
    pub gap_g: f64,
    pub h_y_nf: f64,
    pub h_y_given_x_nf: f64,
}

impl From<InfoPoint> for RmiInfoPoint {
    fn from(p: InfoPoint) -> Self {
        RmiInfoPoint {
            omega_sq: p.omega_sq,
            snr_db: p.snr_db,
            h_y: p.h_y,
            h_y_given_x: p.h_y_given_x,
            mutual_info: p.mutual_info,
            mi_clamped: p.mi_clamped as i32,
            c_rcsi: p.c_rcsi,
            c_cnf: p.c_cnf,
            lower_bound: p.lower_bound,
            gap_g: p.gap_g,
            h_y_nf: p.h_y_nf,
            h_y_given_x_nf: p.h_y_given_x_nf,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(RmiStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) => RmiStatus::Domain,
            Error::InvalidArgument(_) => RmiStatus::InvalidArgument,
            Error::Convergence(_) => RmiStatus::Convergence,
            Error::Evaluation(_) => RmiStatus::Evaluation,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RmiStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> RmiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            RmiStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            RmiStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn rule_ref<'a>(rule: *const RmiRule) -> Result<&'a QuadratureRule, Failure> {
    rule.as_ref().map(|r| &r.0).ok_or_else(|| null("rule"))
}

/// Message for the last failing call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn rmi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn new_rule(
    build: fn(usize) -> rayleigh_mi::Result<QuadratureRule>,
    q: usize,
    out: *mut *mut RmiRule,
) -> RmiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let rule = build(q)?;
        out.write(Box::into_raw(Box::new(RmiRule(rule))));
        Ok(())
    })
}

/// Half-range Gauss-Hermite rule with `q` points (weight `e^{-t^2}` on `[0, inf)`).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_rule_half_range(q: usize, out: *mut *mut RmiRule) -> RmiStatus {
    new_rule(QuadratureRule::half_range, q, out)
}

/// Full-range Gauss-Hermite rule with `q` points.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_rule_full_range(q: usize, out: *mut *mut RmiRule) -> RmiStatus {
    new_rule(QuadratureRule::full_range, q, out)
}

/// Releases a rule; null is ignored.
///
/// # Safety
/// `rule` must come from `rmi_rule_*` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rmi_rule_free(rule: *mut RmiRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// Number of points in `rule`.
///
/// # Safety
/// `rule` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_rule_len(rule: *const RmiRule, out: *mut usize) -> RmiStatus {
    guard(|| write(out, rule_ref(rule)?.order()))
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if len < src.len() {
        return Err(Failure(
            RmiStatus::InvalidArgument,
            format!("buffer holds {len} values, rule has {}", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Copies the nodes (increasing) into `buf`, which must hold at least the
/// rule length.
///
/// # Safety
/// `rule` must be a live handle; `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_rule_nodes(
    rule: *const RmiRule,
    buf: *mut f64,
    len: usize,
) -> RmiStatus {
    guard(|| copy_out(rule_ref(rule)?.nodes(), buf, len))
}

/// Copies the weights into `buf`.
///
/// # Safety
/// `rule` must be a live handle; `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_rule_weights(
    rule: *const RmiRule,
    buf: *mut f64,
    len: usize,
) -> RmiStatus {
    guard(|| copy_out(rule_ref(rule)?.weights(), buf, len))
}

/// Exponential integral `Ei(x)`, `x != 0`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_exp_integral_ei(x: f64, out: *mut f64) -> RmiStatus {
    guard(|| write(out, special::exp_integral_ei(x)?))
}

/// Coherent-receiver capacity `-e^{1/s} Ei(-1/s)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_c_rcsi(omega_sq: f64, out: *mut f64) -> RmiStatus {
    guard(|| write(out, channel::c_rcsi(&ChannelParams::new(omega_sq)?)))
}

/// Non-fading capacity `ln(1 + s)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_c_cnf(omega_sq: f64, out: *mut f64) -> RmiStatus {
    guard(|| write(out, channel::c_cnf(&ChannelParams::new(omega_sq)?)))
}

/// Analytical lower bound on the Gaussian-input mutual information.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_lower_bound(omega_sq: f64, out: *mut f64) -> RmiStatus {
    guard(|| write(out, channel::lower_bound(&ChannelParams::new(omega_sq)?)))
}

/// Output entropy `h(Y)` with half-range rules `outer` and `inner`.
///
/// # Safety
/// Both rules must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_h_y(
    omega_sq: f64,
    outer: *const RmiRule,
    inner: *const RmiRule,
    out: *mut f64,
) -> RmiStatus {
    guard(|| {
        let p = ChannelParams::new(omega_sq)?;
        write(out, channel::h_y(&p, rule_ref(outer)?, rule_ref(inner)?)?)
    })
}

/// Gaussian-input mutual information (nats).
///
/// # Safety
/// Both rules must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_mutual_information(
    omega_sq: f64,
    outer: *const RmiRule,
    inner: *const RmiRule,
    out: *mut f64,
) -> RmiStatus {
    guard(|| {
        let p = ChannelParams::new(omega_sq)?;
        write(
            out,
            channel::mutual_information(&p, rule_ref(outer)?, rule_ref(inner)?)?.value,
        )
    })
}

/// Every per-SNR quantity at once.
///
/// # Safety
/// Both rules must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmi_info_point(
    omega_sq: f64,
    outer: *const RmiRule,
    inner: *const RmiRule,
    out: *mut RmiInfoPoint,
) -> RmiStatus {
    guard(|| {
        let p = ChannelParams::new(omega_sq)?;
        let point = InfoPoint::compute(&p, rule_ref(outer)?, rule_ref(inner)?)?;
        write(out, point.into())
    })
}
