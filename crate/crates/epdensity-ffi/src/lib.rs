//! C ABI over the error-density estimators.
//!
//! Estimates are returned as opaque handles created by the `ep_*` fit
//! functions and released with [`ep_estimate_free`]. Every fallible call
//! returns an [`EpStatus`]; out-parameters are written only on `Ok`.
//!
//! The generated header lands in `include/epdensity.h` at build time.

use epdensity::ep::{fit_finite, fit_infinite, DensityEstimate};
use epdensity::pipeline::{estimate_error_density, pinsker_oracle, ObservationSet, SupportSpec};
use epdensity::theory;
use epdensity::Error;
use std::os::raw::c_char;
use std::slice;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpStatus {
    Ok = 0,
    /// A pointer argument was null or a length was zero/invalid.
    InvalidArgument = 1,
    /// Too few observations for the requested fit.
    SampleTooSmall = 2,
    /// A predictor fell outside [0, 1].
    PredictorOutOfRange = 3,
    /// A scalar argument fell outside the formula's domain.
    DomainError = 4,
    /// Any other library error.
    Internal = 5,
}

fn status_of(err: &Error) -> EpStatus {
    match err {
        Error::SampleTooSmall { .. } | Error::EmptySample => EpStatus::SampleTooSmall,
        Error::PredictorOutOfRange { .. } => EpStatus::PredictorOutOfRange,
        Error::DomainError(_) => EpStatus::DomainError,
        _ => EpStatus::Internal,
    }
}

/// Opaque fitted estimate.
pub struct EpEstimate {
    inner: DensityEstimate,
}

/// Short static description of a status code.
#[no_mangle]
pub extern "C" fn ep_status_message(status: EpStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        EpStatus::Ok => b"ok\0",
        EpStatus::InvalidArgument => b"invalid argument\0",
        EpStatus::SampleTooSmall => b"sample too small\0",
        EpStatus::PredictorOutOfRange => b"predictor outside [0, 1]\0",
        EpStatus::DomainError => b"argument outside domain\0",
        EpStatus::Internal => b"internal error\0",
    };
    msg.as_ptr() as *const c_char
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() || len == 0 {
        None
    } else {
        Some(slice::from_raw_parts(ptr, len))
    }
}

fn boxed(estimate: DensityEstimate, out: *mut *mut EpEstimate) -> EpStatus {
    let handle = Box::new(EpEstimate { inner: estimate });
    unsafe { *out = Box::into_raw(handle) };
    EpStatus::Ok
}

/// Fits the finite-support density estimator to `len` values in `sample`.
///
/// # Safety
/// `sample` must point to `len` readable doubles and `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn ep_fit_finite(
    sample: *const f64,
    len: usize,
    out: *mut *mut EpEstimate,
) -> EpStatus {
    if out.is_null() {
        return EpStatus::InvalidArgument;
    }
    let Some(z) = slice_arg(sample, len) else {
        return EpStatus::InvalidArgument;
    };
    match fit_finite(z) {
        Ok(e) => boxed(DensityEstimate::Finite(e), out),
        Err(e) => status_of(&e),
    }
}

/// Fits the infinite-support density estimator to `len` values in `sample`.
///
/// # Safety
/// Same contract as [`ep_fit_finite`].
#[no_mangle]
pub unsafe extern "C" fn ep_fit_infinite(
    sample: *const f64,
    len: usize,
    out: *mut *mut EpEstimate,
) -> EpStatus {
    if out.is_null() {
        return EpStatus::InvalidArgument;
    }
    let Some(z) = slice_arg(sample, len) else {
        return EpStatus::InvalidArgument;
    };
    match fit_infinite(z) {
        Ok(e) => boxed(DensityEstimate::Infinite(e), out),
        Err(e) => status_of(&e),
    }
}

unsafe fn gather_obs(xs: *const f64, ys: *const f64, n: usize) -> Result<ObservationSet, EpStatus> {
    let xs = slice_arg(xs, n).ok_or(EpStatus::InvalidArgument)?;
    let ys = slice_arg(ys, n).ok_or(EpStatus::InvalidArgument)?;
    ObservationSet::new(xs.iter().copied().zip(ys.iter().copied()).collect())
        .map_err(|e| status_of(&e))
}

/// End-to-end plug-in estimate for errors supported on `[a, a + b]`.
///
/// # Safety
/// `xs` and `ys` must each point to `n` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ep_estimate_finite(
    xs: *const f64,
    ys: *const f64,
    n: usize,
    a: f64,
    b: f64,
    out: *mut *mut EpEstimate,
) -> EpStatus {
    if out.is_null() || !b.is_finite() || b <= 0.0 {
        return EpStatus::InvalidArgument;
    }
    let obs = match gather_obs(xs, ys, n) {
        Ok(o) => o,
        Err(s) => return s,
    };
    match estimate_error_density(&obs, &SupportSpec::Finite { a, b }) {
        Ok(e) => boxed(e, out),
        Err(e) => status_of(&e),
    }
}

/// End-to-end plug-in estimate for errors supported on the real line.
///
/// # Safety
/// Same contract as [`ep_estimate_finite`].
#[no_mangle]
pub unsafe extern "C" fn ep_estimate_infinite(
    xs: *const f64,
    ys: *const f64,
    n: usize,
    out: *mut *mut EpEstimate,
) -> EpStatus {
    if out.is_null() {
        return EpStatus::InvalidArgument;
    }
    let obs = match gather_obs(xs, ys, n) {
        Ok(o) => o,
        Err(s) => return s,
    };
    match estimate_error_density(&obs, &SupportSpec::Infinite) {
        Ok(e) => boxed(e, out),
        Err(e) => status_of(&e),
    }
}

/// Benchmark fit on the full true error vector (finite support when
/// `infinite` is 0).
///
/// # Safety
/// `errors` must point to `n` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ep_pinsker_oracle(
    errors: *const f64,
    n: usize,
    infinite: i32,
    out: *mut *mut EpEstimate,
) -> EpStatus {
    if out.is_null() {
        return EpStatus::InvalidArgument;
    }
    let Some(z) = slice_arg(errors, n) else {
        return EpStatus::InvalidArgument;
    };
    let support = if infinite != 0 {
        SupportSpec::Infinite
    } else {
        SupportSpec::Finite { a: 0.0, b: 1.0 }
    };
    match pinsker_oracle(z, &support) {
        Ok(e) => boxed(e, out),
        Err(e) => status_of(&e),
    }
}

/// Evaluates the estimate at one point.
///
/// # Safety
/// `estimate` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ep_estimate_eval(
    estimate: *const EpEstimate,
    z: f64,
    out: *mut f64,
) -> EpStatus {
    if estimate.is_null() || out.is_null() {
        return EpStatus::InvalidArgument;
    }
    *out = (*estimate).inner.evaluate(z);
    EpStatus::Ok
}

/// Evaluates the estimate on `len` points, writing into `out`.
///
/// # Safety
/// `zs` and `out` must each point to `len` doubles; `estimate` must be live.
#[no_mangle]
pub unsafe extern "C" fn ep_estimate_eval_grid(
    estimate: *const EpEstimate,
    zs: *const f64,
    len: usize,
    out: *mut f64,
) -> EpStatus {
    if estimate.is_null() || out.is_null() {
        return EpStatus::InvalidArgument;
    }
    let Some(grid) = slice_arg(zs, len) else {
        return EpStatus::InvalidArgument;
    };
    let sink = slice::from_raw_parts_mut(out, len);
    for (s, &z) in sink.iter_mut().zip(grid) {
        *s = (*estimate).inner.evaluate(z);
    }
    EpStatus::Ok
}

/// Number of shrinkage blocks in the fitted scheme.
///
/// # Safety
/// `estimate` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ep_estimate_block_count(
    estimate: *const EpEstimate,
    out: *mut usize,
) -> EpStatus {
    if estimate.is_null() || out.is_null() {
        return EpStatus::InvalidArgument;
    }
    *out = (*estimate).inner.weights().len();
    EpStatus::Ok
}

/// Copies the per-block shrinkage weights into `out` (length from
/// [`ep_estimate_block_count`]).
///
/// # Safety
/// `out` must point to at least `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ep_estimate_weights(
    estimate: *const EpEstimate,
    out: *mut f64,
    len: usize,
) -> EpStatus {
    if estimate.is_null() || out.is_null() {
        return EpStatus::InvalidArgument;
    }
    let weights = (*estimate).inner.weights();
    if len < weights.len() {
        return EpStatus::InvalidArgument;
    }
    let sink = slice::from_raw_parts_mut(out, weights.len());
    sink.copy_from_slice(weights);
    EpStatus::Ok
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `estimate` must be a handle from this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn ep_estimate_free(estimate: *mut EpEstimate) {
    if !estimate.is_null() {
        drop(Box::from_raw(estimate));
    }
}

/// Sharp Sobolev risk constant.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ep_pinsker_constant(alpha: f64, q: f64, out: *mut f64) -> EpStatus {
    if out.is_null() {
        return EpStatus::InvalidArgument;
    }
    match theory::pinsker_constant(alpha, q) {
        Ok(v) => {
            *out = v;
            EpStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Sobolev normalizing factor.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ep_sobolev_rate_factor(
    n: usize,
    alpha: f64,
    q: f64,
    out: *mut f64,
) -> EpStatus {
    if out.is_null() {
        return EpStatus::InvalidArgument;
    }
    match theory::sobolev_rate_factor(n, alpha, q) {
        Ok(v) => {
            *out = v;
            EpStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Analytic-class normalizing factor.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ep_analytic_rate_factor(n: usize, gamma: f64, out: *mut f64) -> EpStatus {
    if out.is_null() {
        return EpStatus::InvalidArgument;
    }
    match theory::analytic_rate_factor(n, gamma) {
        Ok(v) => {
            *out = v;
            EpStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
