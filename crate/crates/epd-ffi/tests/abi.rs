//! Exercises the C ABI from Rust (status codes, handle lifecycles, buffer
//! contracts) and once through an actual C compiler against the generated
//! header.

use std::os::raw::c_char;
use std::path::{Path, PathBuf};
use std::ptr;

use epd_ffi::*;

fn last_error() -> String {
    let needed = unsafe { epd_last_error_message(ptr::null_mut(), 0) };
    let mut buf = vec![0u8; needed + 1];
    unsafe { epd_last_error_message(buf.as_mut_ptr().cast::<c_char>(), buf.len()) };
    buf.pop();
    String::from_utf8(buf).expect("error text is utf-8")
}

#[test]
fn scalar_evaluation_matches_the_library() {
    let params = [2.0, 1.0];
    let mut out = f64::NAN;
    let st = unsafe { epd_pdf(EpdFamily::Epd2, params.as_ptr(), 2, 0.5, &mut out) };
    assert_eq!(st, EpdStatus::Ok);
    let direct = epd::EpdParams::new(2.0, 1.0).unwrap().pdf(0.5).unwrap();
    assert_eq!(out, direct, "same code path, same bits");

    let st = unsafe { epd_cdf(EpdFamily::Cepd, params.as_ptr(), 2, 0.25, &mut out) };
    assert_eq!(st, EpdStatus::Ok);
    assert!(out > 0.0 && out < 1.0);

    let st = unsafe { epd_quantile(EpdFamily::Kumaraswamy, params.as_ptr(), 2, 0.5, &mut out) };
    assert_eq!(st, EpdStatus::Ok);
    let mut back = f64::NAN;
    unsafe { epd_cdf(EpdFamily::Kumaraswamy, params.as_ptr(), 2, out, &mut back) };
    assert!((back - 0.5).abs() < 1e-12);

    let coeffs = [1.0, 0.001, 4.0];
    let st = unsafe { epd_moment(EpdFamily::Gepd, coeffs.as_ptr(), 3, 1, &mut out) };
    assert_eq!(st, EpdStatus::Ok);
    assert!(out > 0.0 && out < 1.0, "a mean on the unit interval");

    // closed-form and quadrature moments agree through the C surface too
    let mut closed = f64::NAN;
    unsafe { epd_moment(EpdFamily::Epd2, params.as_ptr(), 2, 2, &mut closed) };
    let mut quad = f64::NAN;
    unsafe { epd_moment(EpdFamily::Gepd, params.as_ptr(), 2, 2, &mut quad) };
    assert!((closed - quad).abs() < 1e-8);
}

#[test]
fn failures_return_typed_status_and_a_message() {
    let params = [2.0, 1.0];
    let mut out = f64::NAN;

    let st = unsafe { epd_pdf(EpdFamily::Epd2, params.as_ptr(), 2, 0.0, &mut out) };
    assert_eq!(st, EpdStatus::InvalidArgument);
    assert!(last_error().contains("support"), "message: {}", last_error());

    let bad = [-1.0, 1.0];
    let st = unsafe { epd_pdf(EpdFamily::Epd2, bad.as_ptr(), 2, 0.5, &mut out) };
    assert_eq!(st, EpdStatus::InvalidArgument);
    assert!(!last_error().is_empty());

    let st = unsafe { epd_pdf(EpdFamily::Epd2, params.as_ptr(), 2, 0.5, ptr::null_mut()) };
    assert_eq!(st, EpdStatus::InvalidArgument);

    let st = unsafe { epd_pdf(EpdFamily::Epd2, ptr::null(), 2, 0.5, &mut out) };
    assert_eq!(st, EpdStatus::InvalidArgument);

    let st = unsafe { epd_moment(EpdFamily::Epd2, params.as_ptr(), 2, 0, &mut out) };
    assert_eq!(st, EpdStatus::InvalidArgument, "zero moment order");

    let st = unsafe { epd_pdf(EpdFamily::Epd2, params.as_ptr(), 3, 0.5, &mut out) };
    assert_eq!(st, EpdStatus::InvalidArgument, "wrong parameter count");

    // truncation: a 8-byte buffer keeps 7 chars plus NUL and reports the
    // full length
    let full = unsafe { epd_last_error_message(ptr::null_mut(), 0) };
    let mut small = [0 as c_char; 8];
    let reported = unsafe { epd_last_error_message(small.as_mut_ptr(), small.len()) };
    assert_eq!(reported, full);
    assert_eq!(small[7], 0);
    assert_ne!(small[0], 0);
}

#[test]
fn sampling_is_deterministic_and_bounded() {
    let params = [1.0, 0.001, 4.0];
    let mut a = vec![0.0f64; 256];
    let mut b = vec![0.0f64; 256];
    let st = unsafe { epd_sample(EpdFamily::Gepd, params.as_ptr(), 3, 256, 7, a.as_mut_ptr()) };
    assert_eq!(st, EpdStatus::Ok);
    let st = unsafe { epd_sample(EpdFamily::Gepd, params.as_ptr(), 3, 256, 7, b.as_mut_ptr()) };
    assert_eq!(st, EpdStatus::Ok);
    assert_eq!(a, b, "same seed, same bytes");
    assert!(a.iter().all(|&t| t > 0.0 && t <= 1.0));

    let st = unsafe { epd_sample(EpdFamily::Gepd, params.as_ptr(), 3, 256, 8, b.as_mut_ptr()) };
    assert_eq!(st, EpdStatus::Ok);
    assert_ne!(a, b, "different seed, different stream");

    // zero draws require no buffer at all
    let st = unsafe { epd_sample(EpdFamily::Gepd, params.as_ptr(), 3, 0, 7, ptr::null_mut()) };
    assert_eq!(st, EpdStatus::Ok);
}

#[test]
fn fit_lifecycle_and_accessors() {
    let truth = [2.0, 1.0];
    let mut values = vec![0.0f64; 800];
    unsafe { epd_sample(EpdFamily::Epd2, truth.as_ptr(), 2, 800, 99, values.as_mut_ptr()) };

    let mut data: *mut EpdDataset = ptr::null_mut();
    let st = unsafe { epd_dataset_new(values.as_ptr(), values.len(), &mut data) };
    assert_eq!(st, EpdStatus::Ok);
    assert_eq!(unsafe { epd_dataset_len(data) }, 800);

    let mut fit: *mut EpdFitResult = ptr::null_mut();
    let st = unsafe { epd_fit(EpdFamily::Epd2, 0, data, &mut fit) };
    assert_eq!(st, EpdStatus::Ok);

    assert_eq!(unsafe { epd_fit_num_params(fit) }, 2);
    assert!(unsafe { epd_fit_converged(fit) });
    assert_eq!(unsafe { epd_fit_sample_size(fit) }, 800);

    let mut est = [0.0f64; 2];
    assert_eq!(unsafe { epd_fit_estimates(fit, est.as_mut_ptr(), 2) }, EpdStatus::Ok);
    assert!((est[0] - 2.0).abs() < 0.5 && (est[1] - 1.0).abs() < 0.6, "{est:?}");

    // a too-small buffer is rejected before any write
    let mut one = [0.0f64; 1];
    assert_eq!(
        unsafe { epd_fit_estimates(fit, one.as_mut_ptr(), 1) },
        EpdStatus::InvalidArgument
    );

    assert!(unsafe { epd_fit_has_std_errors(fit) });
    let mut se = [0.0f64; 2];
    assert_eq!(unsafe { epd_fit_std_errors(fit, se.as_mut_ptr(), 2) }, EpdStatus::Ok);
    assert!(se.iter().all(|&s| s > 0.0 && s < 1.0), "{se:?}");

    let mut flags = [true; 2];
    assert_eq!(
        unsafe { epd_fit_boundary_flags(fit, flags.as_mut_ptr(), 2) },
        EpdStatus::Ok
    );
    assert_eq!(flags, [false, false], "interior optimum");

    let ll = unsafe { epd_fit_loglik(fit) };
    let aic = unsafe { epd_fit_aic(fit) };
    let bic = unsafe { epd_fit_bic(fit) };
    assert!(ll.is_finite() && aic.is_finite() && bic.is_finite());
    assert!((aic - (-2.0 * ll + 4.0)).abs() < 1e-9);
    assert!(bic > aic, "log(800) > 2 makes the BIC penalty heavier");
    let mut aicc = f64::NAN;
    assert_eq!(unsafe { epd_fit_aicc(fit, &mut aicc) }, EpdStatus::Ok);
    assert!(aicc > aic);

    unsafe {
        epd_fit_free(fit);
        epd_dataset_free(data);
    }
}

#[test]
fn undefined_likelihood_is_a_distinct_status() {
    let values = [0.25, 0.5, 1.0, 0.75, 1.0, 0.4, 0.9, 0.66, 0.31, 0.58];
    let mut data: *mut EpdDataset = ptr::null_mut();
    assert_eq!(
        unsafe { epd_dataset_new(values.as_ptr(), values.len(), &mut data) },
        EpdStatus::Ok
    );

    let mut fit: *mut EpdFitResult = ptr::null_mut();
    let st = unsafe { epd_fit(EpdFamily::Kumaraswamy, 0, data, &mut fit) };
    assert_eq!(st, EpdStatus::Undefined);
    assert!(fit.is_null(), "no handle on failure");
    assert!(last_error().contains("undefined"), "message: {}", last_error());

    // the power families handle the same data
    let st = unsafe { epd_fit(EpdFamily::Epd2, 0, data, &mut fit) };
    assert_eq!(st, EpdStatus::Ok);
    unsafe { epd_fit_free(fit) };

    unsafe { epd_dataset_free(data) };
}

#[test]
fn polynomial_fit_validates_its_order() {
    let truth = [1.0, 1.0];
    let mut values = vec![0.0f64; 64];
    unsafe { epd_sample(EpdFamily::Epd2, truth.as_ptr(), 2, 64, 3, values.as_mut_ptr()) };
    let mut data: *mut EpdDataset = ptr::null_mut();
    unsafe { epd_dataset_new(values.as_ptr(), values.len(), &mut data) };

    let mut fit: *mut EpdFitResult = ptr::null_mut();
    assert_eq!(
        unsafe { epd_fit(EpdFamily::Gepd, 1, data, &mut fit) },
        EpdStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { epd_fit(EpdFamily::Gepd, 9, data, &mut fit) },
        EpdStatus::InvalidArgument
    );
    assert_eq!(unsafe { epd_fit(EpdFamily::Gepd, 3, data, &mut fit) }, EpdStatus::Ok);
    assert_eq!(unsafe { epd_fit_num_params(fit) }, 3);
    unsafe {
        epd_fit_free(fit);
        epd_dataset_free(data);
    }
}

#[test]
fn small_samples_withhold_the_corrected_criterion() {
    let values = [0.2, 0.5, 0.8];
    let mut data: *mut EpdDataset = ptr::null_mut();
    unsafe { epd_dataset_new(values.as_ptr(), 3, &mut data) };
    let mut fit: *mut EpdFitResult = ptr::null_mut();
    let st = unsafe { epd_fit(EpdFamily::Epd2, 0, data, &mut fit) };
    assert_eq!(st, EpdStatus::Ok);
    let mut aicc = f64::NAN;
    assert_eq!(unsafe { epd_fit_aicc(fit, &mut aicc) }, EpdStatus::Undefined);
    assert!(aicc.is_nan(), "output untouched on failure");
    unsafe {
        epd_fit_free(fit);
        epd_dataset_free(data);
    }
}

#[test]
fn null_handles_are_benign() {
    assert_eq!(unsafe { epd_dataset_len(ptr::null()) }, 0);
    assert_eq!(unsafe { epd_fit_num_params(ptr::null()) }, 0);
    assert_eq!(unsafe { epd_fit_sample_size(ptr::null()) }, 0);
    assert!(unsafe { epd_fit_loglik(ptr::null()) }.is_nan());
    assert!(unsafe { epd_fit_aic(ptr::null()) }.is_nan());
    assert!(unsafe { epd_fit_bic(ptr::null()) }.is_nan());
    assert!(!unsafe { epd_fit_converged(ptr::null()) });
    assert!(!unsafe { epd_fit_has_std_errors(ptr::null()) });
    unsafe {
        epd_fit_free(ptr::null_mut());
        epd_dataset_free(ptr::null_mut());
    }
    let mut data: *mut EpdDataset = ptr::null_mut();
    assert_eq!(
        unsafe { epd_dataset_new(ptr::null(), 5, &mut data) },
        EpdStatus::InvalidArgument
    );
    let mut fit: *mut EpdFitResult = ptr::null_mut();
    assert_eq!(
        unsafe { epd_fit(EpdFamily::Epd2, 0, ptr::null(), &mut fit) },
        EpdStatus::InvalidArgument
    );
}

/// Compiles and runs a small C program against the generated header and
/// the static library, proving the shipped artifacts work outside Rust.
#[test]
fn c_program_links_against_the_header_and_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let lib = static_lib_path(manifest);
    assert!(lib.exists(), "static library not found at {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "epd.h"

int main(void) {
    double params[2] = {2.0, 1.0};
    double draws[400];
    if (epd_sample(EPD_FAMILY_EPD2, params, 2, 400, 11, draws)) return 1;

    EpdDataset *data = NULL;
    if (epd_dataset_new(draws, 400, &data)) return 2;

    EpdFitResult *fit = NULL;
    if (epd_fit(EPD_FAMILY_EPD2, 0, data, &fit)) return 3;
    if (!epd_fit_converged(fit)) return 4;

    double est[2];
    if (epd_fit_estimates(fit, est, 2)) return 5;
    if (!(est[0] > 0.5 && est[0] < 4.0)) return 6;

    double bad = 0.0;
    if (epd_pdf(EPD_FAMILY_EPD2, params, 2, -1.0, &bad) != EPD_STATUS_INVALID_ARGUMENT) return 7;
    char msg[128];
    if (epd_last_error_message(msg, sizeof msg) == 0) return 8;

    printf("loglik %.6f aic %.6f\n", epd_fit_loglik(fit), epd_fit_aic(fit));
    epd_fit_free(fit);
    epd_dataset_free(data);
    return 0;
}
"#,
    )
    .unwrap();

    let exe = dir.path().join("smoke");
    let compile = std::process::Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "compile failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = std::process::Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "smoke exited {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout)
    );
    let text = String::from_utf8_lossy(&run.stdout);
    assert!(text.contains("loglik"), "output was: {text}");
}

fn static_lib_path(manifest: &Path) -> PathBuf {
    // tests run from the workspace target dir; honor CARGO_TARGET_DIR when set
    let target = std::env::var_os("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| manifest.join("../../target"));
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    target.join(profile).join("libepd_ffi.a")
}
