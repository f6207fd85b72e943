//! C interface to the unit-interval distribution library: evaluation,
//! sampling, and maximum-likelihood fitting behind opaque handles and
//! integer status codes. The matching header is generated into
//! `include/epd.h` when this crate builds.
//!
//! Conventions:
//! - every fallible call returns [`EpdStatus`]; outputs go through pointers
//! - `EPD_STATUS_OK` is zero, so `if (status) goto fail;` works in C
//! - on any non-zero status a thread-local message is set, readable with
//!   [`epd_last_error_message`]
//! - handles from `epd_dataset_new` / `epd_fit` must be released with the
//!   matching `_free` function exactly once; `_free(NULL)` is a no-op

use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use epd::{
    fit_mle, information_criteria, CepdParams, Criteria, Dataset, EpdParams, Error, Family,
    FitOptions, FitResult, GepdParams, KumaraswamyParams,
};

/// Outcome of a call. Zero is success; everything else is a failure whose
/// text is available from `epd_last_error_message`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EpdStatus {
    /// The call succeeded and all outputs are valid.
    Ok = 0,
    /// A pointer was null, a buffer too small, or a value outside its
    /// documented domain (parameters, probabilities, support points).
    InvalidArgument = 1,
    /// The requested quantity does not exist for this input, e.g. a
    /// likelihood that is unbounded on the given data.
    Undefined = 2,
    /// An iterative numeric routine (quadrature, root finding,
    /// optimization) failed to reach its accuracy target.
    Numeric = 3,
    /// An unexpected internal failure; the library state is still sound.
    Internal = 4,
}

/// Model family selector for evaluation, sampling, and fitting.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EpdFamily {
    /// Two-parameter family on (0, 1]; params are [alpha0, alpha1].
    Epd2 = 0,
    /// Generalized polynomial-order family; params are the r coefficients.
    Gepd = 1,
    /// Complementary family; params are [alpha0, alpha1].
    Cepd = 2,
    /// Two-shape baseline; params are [a, b].
    Kumaraswamy = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend_from_slice(msg.as_bytes());
    });
}

fn fail(status: EpdStatus, msg: &str) -> EpdStatus {
    set_error(msg);
    status
}

fn status_of(err: &Error) -> EpdStatus {
    if err.is_numeric() {
        EpdStatus::Numeric
    } else if matches!(err, Error::UndefinedLikelihood { .. }) {
        EpdStatus::Undefined
    } else {
        EpdStatus::InvalidArgument
    }
}

fn fail_with(err: Error) -> EpdStatus {
    let status = status_of(&err);
    set_error(&err.to_string());
    status
}

/// Runs a body that may call into library numerics, translating any panic
/// into `Internal` instead of unwinding across the C boundary.
fn guarded(body: impl FnOnce() -> EpdStatus) -> EpdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(EpdStatus::Internal, "internal panic; inputs were not consumed"),
    }
}

/// Copies the message for the most recent failure on this thread into
/// `buf` (NUL-terminated, truncated to `cap` bytes including the NUL) and
/// returns the full message length in bytes, excluding the NUL. Passing a
/// null `buf` or zero `cap` just queries the length. The message is only
/// meaningful directly after a call returned non-zero.
#[no_mangle]
pub unsafe extern "C" fn epd_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = e.len().min(cap - 1);
            // # Safety: caller guarantees `buf` points to `cap` writable bytes
            unsafe {
                std::ptr::copy_nonoverlapping(e.as_ptr(), buf.cast::<u8>(), n);
                *buf.add(n) = 0;
            }
        }
        e.len()
    })
}

/// # Safety: `params` must point to `n_params` readable doubles.
unsafe fn params_slice<'a>(params: *const f64, n_params: usize) -> Option<&'a [f64]> {
    if n_params == 0 {
        return Some(&[]);
    }
    if params.is_null() {
        return None;
    }
    Some(unsafe { std::slice::from_raw_parts(params, n_params) })
}

enum Model {
    Two(EpdParams),
    Poly(GepdParams),
    Comp(CepdParams),
    Kuma(KumaraswamyParams),
}

fn build_model(family: EpdFamily, params: &[f64]) -> Result<Model, Error> {
    let need_two = |what: &'static str| {
        if params.len() == 2 {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name: what,
                requirement: "exactly two parameters",
                value: params.len() as f64,
            })
        }
    };
    match family {
        EpdFamily::Epd2 => {
            need_two("epd2 params")?;
            Ok(Model::Two(EpdParams::new(params[0], params[1])?))
        }
        EpdFamily::Gepd => Ok(Model::Poly(GepdParams::new(params.to_vec())?)),
        EpdFamily::Cepd => {
            need_two("cepd params")?;
            Ok(Model::Comp(CepdParams::new(params[0], params[1])?))
        }
        EpdFamily::Kumaraswamy => {
            need_two("kumaraswamy params")?;
            Ok(Model::Kuma(KumaraswamyParams::new(params[0], params[1])?))
        }
    }
}

impl Model {
    fn pdf(&self, t: f64) -> Result<f64, Error> {
        match self {
            Model::Two(p) => p.pdf(t),
            Model::Poly(p) => p.pdf(t),
            Model::Comp(p) => p.pdf(t),
            Model::Kuma(p) => p.pdf(t),
        }
    }

    fn cdf(&self, t: f64) -> Result<f64, Error> {
        match self {
            Model::Two(p) => p.cdf(t),
            Model::Poly(p) => p.cdf(t),
            Model::Comp(p) => p.cdf(t),
            Model::Kuma(p) => p.cdf(t),
        }
    }

    fn quantile(&self, p: f64) -> Result<f64, Error> {
        match self {
            Model::Two(m) => m.quantile(p),
            Model::Poly(m) => m.sample_from_u(p),
            Model::Comp(m) => m.sample_from_u(p),
            Model::Kuma(m) => m.quantile(p),
        }
    }

    fn moment(&self, k: u32) -> Result<f64, Error> {
        match self {
            Model::Two(p) => p.moment(k),
            Model::Poly(p) => Ok(p.moment_numeric(k)?.value),
            Model::Comp(p) => p.moment(k),
            Model::Kuma(p) => Ok(p.moment_numeric(k)?.value),
        }
    }

    fn sample_n(&self, n: usize, seed: u64) -> Vec<f64> {
        match self {
            Model::Two(p) => p.sample_n(n, seed),
            Model::Poly(p) => p.sample_n(n, seed),
            Model::Comp(p) => p.sample_n(n, seed),
            Model::Kuma(p) => p.sample_n(n, seed),
        }
    }
}

/// Shared shape of the scalar evaluators.
///
/// # Safety
/// `params` must point to `n_params` readable doubles and `out` to one
/// writable double.
unsafe fn eval_scalar(
    family: EpdFamily,
    params: *const f64,
    n_params: usize,
    x: f64,
    out: *mut f64,
    f: impl Fn(&Model, f64) -> Result<f64, Error>,
) -> EpdStatus {
    if out.is_null() {
        return fail(EpdStatus::InvalidArgument, "out pointer is null");
    }
    let Some(params) = (unsafe { params_slice(params, n_params) }) else {
        return fail(EpdStatus::InvalidArgument, "params pointer is null");
    };
    guarded(|| match build_model(family, params).and_then(|m| f(&m, x)) {
        Ok(v) => {
            unsafe { *out = v };
            EpdStatus::Ok
        }
        Err(e) => fail_with(e),
    })
}

/// Density at `t` in (0, 1].
///
/// # Safety
/// `params` must point to `n_params` readable doubles and `out` to one
/// writable double.
#[no_mangle]
pub unsafe extern "C" fn epd_pdf(
    family: EpdFamily,
    params: *const f64,
    n_params: usize,
    t: f64,
    out: *mut f64,
) -> EpdStatus {
    unsafe { eval_scalar(family, params, n_params, t, out, |m, x| m.pdf(x)) }
}

/// Distribution function at `t` in (0, 1].
///
/// # Safety
/// `params` must point to `n_params` readable doubles and `out` to one
/// writable double.
#[no_mangle]
pub unsafe extern "C" fn epd_cdf(
    family: EpdFamily,
    params: *const f64,
    n_params: usize,
    t: f64,
    out: *mut f64,
) -> EpdStatus {
    unsafe { eval_scalar(family, params, n_params, t, out, |m, x| m.cdf(x)) }
}

/// Quantile transform at probability `p` in (0, 1]. For the polynomial and
/// complementary families this is the exact inverse used by the sampler.
///
/// # Safety
/// `params` must point to `n_params` readable doubles and `out` to one
/// writable double.
#[no_mangle]
pub unsafe extern "C" fn epd_quantile(
    family: EpdFamily,
    params: *const f64,
    n_params: usize,
    p: f64,
    out: *mut f64,
) -> EpdStatus {
    unsafe { eval_scalar(family, params, n_params, p, out, |m, x| m.quantile(x)) }
}

/// Raw moment E[T^k] for integer order `k >= 1`: closed form where one
/// exists (the two-parameter and complementary families), adaptive
/// quadrature otherwise.
///
/// # Safety
/// `params` must point to `n_params` readable doubles and `out` to one
/// writable double.
#[no_mangle]
pub unsafe extern "C" fn epd_moment(
    family: EpdFamily,
    params: *const f64,
    n_params: usize,
    k: u32,
    out: *mut f64,
) -> EpdStatus {
    if out.is_null() {
        return fail(EpdStatus::InvalidArgument, "out pointer is null");
    }
    let Some(params) = (unsafe { params_slice(params, n_params) }) else {
        return fail(EpdStatus::InvalidArgument, "params pointer is null");
    };
    guarded(|| match build_model(family, params).and_then(|m| m.moment(k)) {
        Ok(v) => {
            unsafe { *out = v };
            EpdStatus::Ok
        }
        Err(e) => fail_with(e),
    })
}

/// Fills `out` with `n` draws from the family. The stream is fully
/// determined by `seed`: the same arguments always produce the same bytes.
///
/// # Safety
/// `params` must point to `n_params` readable doubles and `out` to `n`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn epd_sample(
    family: EpdFamily,
    params: *const f64,
    n_params: usize,
    n: usize,
    seed: u64,
    out: *mut f64,
) -> EpdStatus {
    if n > 0 && out.is_null() {
        return fail(EpdStatus::InvalidArgument, "out pointer is null");
    }
    let Some(params) = (unsafe { params_slice(params, n_params) }) else {
        return fail(EpdStatus::InvalidArgument, "params pointer is null");
    };
    guarded(|| match build_model(family, params) {
        Ok(m) => {
            let draws = m.sample_n(n, seed);
            if n > 0 {
                // # Safety: caller guarantees `out` holds `n` doubles
                unsafe { std::ptr::copy_nonoverlapping(draws.as_ptr(), out, n) };
            }
            EpdStatus::Ok
        }
        Err(e) => fail_with(e),
    })
}

/// Opaque immutable dataset of observations in (0, 1].
pub struct EpdDataset {
    inner: Dataset,
}

/// Builds a dataset from `n` values, validating every observation lies in
/// (0, 1]. On success `*out` owns the copy; release it with
/// `epd_dataset_free`.
///
/// # Safety
/// `values` must point to `n` readable doubles and `out` to a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn epd_dataset_new(
    values: *const f64,
    n: usize,
    out: *mut *mut EpdDataset,
) -> EpdStatus {
    if out.is_null() {
        return fail(EpdStatus::InvalidArgument, "out pointer is null");
    }
    if n > 0 && values.is_null() {
        return fail(EpdStatus::InvalidArgument, "values pointer is null");
    }
    let slice = if n == 0 {
        &[][..]
    } else {
        unsafe { std::slice::from_raw_parts(values, n) }
    };
    guarded(|| match Dataset::new(slice.to_vec(), "ffi", "caller-provided buffer") {
        Ok(d) => {
            unsafe { *out = Box::into_raw(Box::new(EpdDataset { inner: d })) };
            EpdStatus::Ok
        }
        Err(e) => fail_with(e),
    })
}

/// Number of observations, or 0 for a null handle.
///
/// # Safety
/// `data` must be null or a live handle from `epd_dataset_new`.
#[no_mangle]
pub unsafe extern "C" fn epd_dataset_len(data: *const EpdDataset) -> usize {
    if data.is_null() {
        return 0;
    }
    unsafe { &*data }.inner.n()
}

/// Releases a dataset handle. Null is ignored; freeing twice is undefined.
///
/// # Safety
/// `data` must be null or an unreleased handle from `epd_dataset_new`.
#[no_mangle]
pub unsafe extern "C" fn epd_dataset_free(data: *mut EpdDataset) {
    if !data.is_null() {
        drop(unsafe { Box::from_raw(data) });
    }
}

/// Opaque maximum-likelihood fit: estimates, uncertainty, and the
/// penalized comparison criteria.
pub struct EpdFitResult {
    inner: FitResult,
    criteria: Criteria,
}

fn ffi_family(family: EpdFamily, order: u32) -> Result<Family, Error> {
    match family {
        EpdFamily::Epd2 => Ok(Family::Epd { r: 2 }),
        EpdFamily::Gepd => {
            if (2..=8).contains(&order) {
                Ok(Family::Epd { r: order as usize })
            } else {
                Err(Error::InvalidParameter {
                    name: "order",
                    requirement: "between 2 and 8 for the polynomial family",
                    value: f64::from(order),
                })
            }
        }
        EpdFamily::Cepd => Ok(Family::Cepd),
        EpdFamily::Kumaraswamy => Ok(Family::Kumaraswamy),
    }
}

/// Fits `family` to `data` by maximum likelihood. `order` is the
/// coefficient count for the polynomial family and ignored otherwise. On
/// success `*out` owns the result; release it with `epd_fit_free`.
///
/// Returns `EPD_STATUS_UNDEFINED` when the likelihood is unbounded for the
/// whole family on this data (the baseline with observations equal to 1).
///
/// # Safety
/// `data` must be a live handle from `epd_dataset_new` and `out` a
/// writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn epd_fit(
    family: EpdFamily,
    order: u32,
    data: *const EpdDataset,
    out: *mut *mut EpdFitResult,
) -> EpdStatus {
    if out.is_null() {
        return fail(EpdStatus::InvalidArgument, "out pointer is null");
    }
    if data.is_null() {
        return fail(EpdStatus::InvalidArgument, "data handle is null");
    }
    let data = unsafe { &*data };
    guarded(|| {
        let fam = match ffi_family(family, order) {
            Ok(f) => f,
            Err(e) => return fail_with(e),
        };
        match fit_mle(fam, &data.inner, &FitOptions::default()) {
            Ok(fit) => {
                let criteria = information_criteria(fit.loglik, fam.k(), fit.n);
                let boxed = Box::new(EpdFitResult { inner: fit, criteria });
                unsafe { *out = Box::into_raw(boxed) };
                EpdStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Releases a fit handle. Null is ignored; freeing twice is undefined.
///
/// # Safety
/// `fit` must be null or an unreleased handle from `epd_fit`.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_free(fit: *mut EpdFitResult) {
    if !fit.is_null() {
        drop(unsafe { Box::from_raw(fit) });
    }
}

/// Number of fitted parameters, or 0 for a null handle.
///
/// # Safety
/// `fit` must be null or a live handle from `epd_fit`.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_num_params(fit: *const EpdFitResult) -> usize {
    if fit.is_null() {
        return 0;
    }
    unsafe { &*fit }.inner.estimates.len()
}

/// # Safety: `fit` live handle; `out` writable for `cap` items when checked.
unsafe fn copy_vec(src: &[f64], out: *mut f64, cap: usize) -> EpdStatus {
    if out.is_null() {
        return fail(EpdStatus::InvalidArgument, "out pointer is null");
    }
    if cap < src.len() {
        return fail(EpdStatus::InvalidArgument, "buffer smaller than the parameter count");
    }
    unsafe { std::ptr::copy_nonoverlapping(src.as_ptr(), out, src.len()) };
    EpdStatus::Ok
}

/// Copies the parameter estimates into `out` (capacity `cap` doubles;
/// `epd_fit_num_params` gives the required length).
///
/// # Safety
/// `fit` must be a live handle from `epd_fit` and `out` must point to
/// `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_estimates(
    fit: *const EpdFitResult,
    out: *mut f64,
    cap: usize,
) -> EpdStatus {
    if fit.is_null() {
        return fail(EpdStatus::InvalidArgument, "fit handle is null");
    }
    unsafe { copy_vec(&(*fit).inner.estimates, out, cap) }
}

/// True when asymptotic standard errors are available. They are withheld
/// when an estimate sits on a constraint boundary or the information
/// matrix is singular.
///
/// # Safety
/// `fit` must be null or a live handle from `epd_fit`.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_has_std_errors(fit: *const EpdFitResult) -> bool {
    !fit.is_null() && unsafe { &*fit }.inner.std_errors.is_some()
}

/// Copies the per-parameter standard errors into `out`. Fails with
/// `EPD_STATUS_UNDEFINED` when `epd_fit_has_std_errors` is false.
///
/// # Safety
/// `fit` must be a live handle from `epd_fit` and `out` must point to
/// `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_std_errors(
    fit: *const EpdFitResult,
    out: *mut f64,
    cap: usize,
) -> EpdStatus {
    if fit.is_null() {
        return fail(EpdStatus::InvalidArgument, "fit handle is null");
    }
    match unsafe { &*fit }.inner.std_errors.as_ref() {
        Some(se) => unsafe { copy_vec(se, out, cap) },
        None => fail(
            EpdStatus::Undefined,
            "standard errors are unavailable for this fit (boundary estimate or singular information)",
        ),
    }
}

/// Per-parameter flags marking estimates pinned at a constraint boundary.
///
/// # Safety
/// `fit` must be a live handle from `epd_fit` and `out` must point to
/// `cap` writable booleans.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_boundary_flags(
    fit: *const EpdFitResult,
    out: *mut bool,
    cap: usize,
) -> EpdStatus {
    if fit.is_null() {
        return fail(EpdStatus::InvalidArgument, "fit handle is null");
    }
    if out.is_null() {
        return fail(EpdStatus::InvalidArgument, "out pointer is null");
    }
    let flags = &unsafe { &*fit }.inner.boundary_flags;
    if cap < flags.len() {
        return fail(EpdStatus::InvalidArgument, "buffer smaller than the parameter count");
    }
    unsafe { std::ptr::copy_nonoverlapping(flags.as_ptr(), out, flags.len()) };
    EpdStatus::Ok
}

/// Maximized log likelihood, or NaN for a null handle.
///
/// # Safety
/// `fit` must be null or a live handle from `epd_fit`.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_loglik(fit: *const EpdFitResult) -> f64 {
    if fit.is_null() {
        return f64::NAN;
    }
    unsafe { &*fit }.inner.loglik
}

/// Akaike criterion (smaller is better), or NaN for a null handle.
///
/// # Safety
/// `fit` must be null or a live handle from `epd_fit`.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_aic(fit: *const EpdFitResult) -> f64 {
    if fit.is_null() {
        return f64::NAN;
    }
    unsafe { &*fit }.criteria.aic
}

/// Bayesian criterion (smaller is better), or NaN for a null handle.
///
/// # Safety
/// `fit` must be null or a live handle from `epd_fit`.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_bic(fit: *const EpdFitResult) -> f64 {
    if fit.is_null() {
        return f64::NAN;
    }
    unsafe { &*fit }.criteria.bic
}

/// Small-sample corrected Akaike criterion. Fails with
/// `EPD_STATUS_UNDEFINED` when the sample is too small for the correction
/// (n <= k + 1).
///
/// # Safety
/// `fit` must be a live handle from `epd_fit` and `out` must point to one
/// writable double.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_aicc(fit: *const EpdFitResult, out: *mut f64) -> EpdStatus {
    if fit.is_null() {
        return fail(EpdStatus::InvalidArgument, "fit handle is null");
    }
    if out.is_null() {
        return fail(EpdStatus::InvalidArgument, "out pointer is null");
    }
    match unsafe { &*fit }.criteria.aicc {
        Some(v) => {
            unsafe { *out = v };
            EpdStatus::Ok
        }
        None => fail(
            EpdStatus::Undefined,
            "the small-sample correction needs n > k + 1",
        ),
    }
}

/// Whether the optimizer met its convergence tolerances.
///
/// # Safety
/// `fit` must be null or a live handle from `epd_fit`.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_converged(fit: *const EpdFitResult) -> bool {
    !fit.is_null() && unsafe { &*fit }.inner.converged
}

/// Number of observations the fit used, or 0 for a null handle.
///
/// # Safety
/// `fit` must be null or a live handle from `epd_fit`.
#[no_mangle]
pub unsafe extern "C" fn epd_fit_sample_size(fit: *const EpdFitResult) -> usize {
    if fit.is_null() {
        return 0;
    }
    unsafe { &*fit }.inner.n
}
