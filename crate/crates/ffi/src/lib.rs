//! C ABI for ratiokit.
//!
//! Every fallible function returns an [`RkStatus`]; on failure the message is
//! available from [`rk_last_error`] on the same thread. Objects are opaque
//! handles released with their `_free` function. Strings returned by the
//! library are released with [`rk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use ratiokit::io::{config_from_json, report_from_json, report_to_json};
use ratiokit::pipeline::{run_experiment, ExperimentReport};
use ratiokit::ratio::{
    fit_values, kth_spacing_ratios, predicted_beta_prime, surmise_params, FitGrid, FitReport,
    IndexMode, SurmiseParams,
};
use ratiokit::{Error, ErrorClass, Spectrum, SpectrumKind};

/// Status codes; the nonzero values match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkStatus {
    Ok = 0,
    Usage = 2,
    Data = 3,
    Numerical = 4,
    /// A Rust panic was caught at the boundary.
    Internal = 5,
}

/// `mode` values accepted by [`rk_spacing_ratios`].
pub const RK_MODE_SLIDING: u32 = 0;
pub const RK_MODE_STRIDED: u32 = 1;

/// Opaque normalized ratio surmise.
pub struct RkSurmise(SurmiseParams);

/// Opaque result of a fit.
pub struct RkFit(FitReport);

/// Opaque experiment report.
pub struct RkReport(ExperimentReport);

/// Fixed-size view of one order of a report.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkOrderSummary {
    pub k: usize,
    /// -1 when the source has no symmetry class.
    pub predicted_beta_prime: i64,
    pub beta_fit: f64,
    pub ks_stat: f64,
    pub ks_p: f64,
    pub mean_r: f64,
    pub n: usize,
    pub at_boundary: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RkStatus {
    match e.class() {
        ErrorClass::Usage => RkStatus::Usage,
        ErrorClass::Data => RkStatus::Data,
        ErrorClass::Numerical => RkStatus::Numerical,
    }
}

fn usage(msg: &str) -> RkStatus {
    set_last_error(msg.to_string());
    RkStatus::Usage
}

/// Runs `f`, recording errors and catching panics.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> RkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RkStatus::Ok,
        Ok(Err(e)) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            RkStatus::Internal
        }
    }
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rk_predicted_beta_prime(beta: u32, k: u32, out: *mut u32) -> RkStatus {
    if out.is_null() {
        return usage("null output pointer");
    }
    if beta == 0 || k == 0 {
        return usage("beta and k must be positive");
    }
    *out = predicted_beta_prime(beta, k);
    RkStatus::Ok
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rk_surmise_new(beta_eff: f64, out: *mut *mut RkSurmise) -> RkStatus {
    if out.is_null() {
        return usage("null output pointer");
    }
    guard(|| {
        let p = surmise_params(beta_eff)?;
        *out = Box::into_raw(Box::new(RkSurmise(p)));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`rk_surmise_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rk_surmise_free(h: *mut RkSurmise) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live surmise handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rk_surmise_pdf(h: *const RkSurmise, r: f64, out: *mut f64) -> RkStatus {
    if h.is_null() || out.is_null() {
        return usage("null pointer");
    }
    guard(|| {
        *out = (*h).0.pdf(r);
        Ok(())
    })
}

/// # Safety
/// `h` must be a live surmise handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rk_surmise_cdf(h: *const RkSurmise, r: f64, out: *mut f64) -> RkStatus {
    if h.is_null() || out.is_null() {
        return usage("null pointer");
    }
    guard(|| {
        *out = (*h).0.cdf(r)?;
        Ok(())
    })
}

/// # Safety
/// `h` must be a live surmise handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rk_surmise_mean(h: *const RkSurmise, out: *mut f64) -> RkStatus {
    if h.is_null() || out.is_null() {
        return usage("null pointer");
    }
    guard(|| {
        *out = (*h).0.mean()?;
        Ok(())
    })
}

/// Computes k-th order spacing ratios of `n` sorted levels into `out`.
/// `out_len` receives the number of ratios; when it exceeds `out_cap`
/// nothing is written and `RK_STATUS_USAGE` is returned, so callers can
/// query the size with `out = NULL, out_cap = 0`.
///
/// # Safety
/// `levels` must point to `n` readable doubles, `out` to `out_cap` writable
/// doubles (or be NULL when `out_cap` is 0), and `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rk_spacing_ratios(
    levels: *const f64,
    n: usize,
    k: usize,
    mode: u32,
    out: *mut f64,
    out_cap: usize,
    out_len: *mut usize,
) -> RkStatus {
    if levels.is_null() || out_len.is_null() || (out.is_null() && out_cap > 0) {
        return usage("null pointer");
    }
    let mode = match mode {
        RK_MODE_SLIDING => IndexMode::Sliding,
        RK_MODE_STRIDED => IndexMode::Strided,
        _ => return usage("unknown index mode"),
    };
    let levels = slice::from_raw_parts(levels, n).to_vec();
    let mut status = guard(|| {
        let s = Spectrum::new(levels, SpectrumKind::Line)?;
        let rs = kth_spacing_ratios(&s, k, mode)?;
        *out_len = rs.values.len();
        if !rs.values.is_empty() && rs.values.len() <= out_cap {
            slice::from_raw_parts_mut(out, rs.values.len()).copy_from_slice(&rs.values);
        }
        Ok(())
    });
    if status == RkStatus::Ok && *out_len > out_cap {
        status = usage("output buffer too small");
    }
    status
}

/// Fits the effective index on the grid `lo, lo + step, ..., hi`.
///
/// # Safety
/// `values` must point to `n` readable doubles and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rk_fit(
    values: *const f64,
    n: usize,
    lo: f64,
    hi: f64,
    step: f64,
    out: *mut *mut RkFit,
) -> RkStatus {
    if values.is_null() || out.is_null() {
        return usage("null pointer");
    }
    let values = slice::from_raw_parts(values, n);
    guard(|| {
        let fit = fit_values(values, FitGrid { lo, hi, step })?;
        *out = Box::into_raw(Box::new(RkFit(fit)));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`rk_fit`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rk_fit_free(h: *mut RkFit) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live fit handle.
#[no_mangle]
pub unsafe extern "C" fn rk_fit_beta(h: *const RkFit) -> f64 {
    if h.is_null() {
        return f64::NAN;
    }
    (*h).0.beta_fit
}

/// # Safety
/// `h` must be a live fit handle.
#[no_mangle]
pub unsafe extern "C" fn rk_fit_mean(h: *const RkFit) -> f64 {
    if h.is_null() {
        return f64::NAN;
    }
    (*h).0.mean_r
}

/// # Safety
/// `h` must be a live fit handle; `stat` and `p` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rk_fit_ks(h: *const RkFit, stat: *mut f64, p: *mut f64) -> RkStatus {
    if h.is_null() || stat.is_null() || p.is_null() {
        return usage("null pointer");
    }
    *stat = (*h).0.ks_stat;
    *p = (*h).0.ks_p;
    RkStatus::Ok
}

/// Number of grid points in the distance curve.
///
/// # Safety
/// `h` must be a live fit handle.
#[no_mangle]
pub unsafe extern "C" fn rk_fit_curve_len(h: *const RkFit) -> usize {
    if h.is_null() {
        return 0;
    }
    (*h).0.d_curve.len()
}

/// Copies up to `cap` points of the distance curve; returns the count copied.
///
/// # Safety
/// `h` must be a live fit handle; `betas` and `distances` must each hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn rk_fit_curve(
    h: *const RkFit,
    betas: *mut f64,
    distances: *mut f64,
    cap: usize,
) -> usize {
    if h.is_null() || betas.is_null() || distances.is_null() {
        return 0;
    }
    let fit = &(*h).0;
    let curve = &fit.d_curve;
    let count = curve.len().min(cap);
    for (i, &(b, d)) in curve.iter().take(count).enumerate() {
        *betas.add(i) = b;
        *distances.add(i) = d;
    }
    count
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, RkStatus> {
    if s.is_null() {
        return Err(usage("null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| usage("string is not UTF-8"))
}

/// Runs an experiment described by a JSON config (the `config` object of a report).
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rk_experiment_run(
    config_json: *const c_char,
    out: *mut *mut RkReport,
) -> RkStatus {
    if out.is_null() {
        return usage("null output pointer");
    }
    let text = match read_str(config_json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guard(|| {
        let report = run_experiment(&config_from_json(text)?)?;
        *out = Box::into_raw(Box::new(RkReport(report)));
        Ok(())
    })
}

/// Parses a JSON report.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rk_report_from_json(json: *const c_char, out: *mut *mut RkReport) -> RkStatus {
    if out.is_null() {
        return usage("null output pointer");
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guard(|| {
        *out = Box::into_raw(Box::new(RkReport(report_from_json(text)?)));
        Ok(())
    })
}

/// # Safety
/// `h` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rk_report_free(h: *mut RkReport) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// JSON encoding of the report; free with [`rk_string_free`]. NULL on failure.
///
/// # Safety
/// `h` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn rk_report_to_json(h: *const RkReport) -> *mut c_char {
    if h.is_null() {
        usage("null report");
        return ptr::null_mut();
    }
    let mut out = ptr::null_mut();
    guard(|| {
        let text = report_to_json(&(*h).0)?;
        out = CString::new(text).map_or(ptr::null_mut(), CString::into_raw);
        Ok(())
    });
    out
}

/// # Safety
/// `h` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn rk_report_order_count(h: *const RkReport) -> usize {
    if h.is_null() {
        return 0;
    }
    (*h).0.orders.len()
}

/// # Safety
/// `h` must be a live report handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rk_report_order(
    h: *const RkReport,
    index: usize,
    out: *mut RkOrderSummary,
) -> RkStatus {
    if h.is_null() || out.is_null() {
        return usage("null pointer");
    }
    let report = &(*h).0;
    let Some(o) = report.orders.get(index) else {
        return usage("order index out of range");
    };
    *out = RkOrderSummary {
        k: o.k,
        predicted_beta_prime: o.predicted_beta_prime.map_or(-1, i64::from),
        beta_fit: o.fit.beta_fit,
        ks_stat: o.fit.ks_stat,
        ks_p: o.fit.ks_p,
        mean_r: o.fit.mean_r,
        n: o.n,
        at_boundary: o.fit.at_boundary,
    };
    RkStatus::Ok
}
