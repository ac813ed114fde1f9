//! C ABI over `kamforge`.
//!
//! Series cross the boundary as opaque [`KfSeries`] handles; everything else is JSON text.
//! Every fallible call returns a [`KfStatus`] and, on failure, leaves a message retrievable
//! with [`kf_last_error`] on the calling thread. Strings returned by the library must be
//! released with [`kf_string_free`], handles with [`kf_series_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use kamforge::cli::{render, run_scenario_str, selftest_report, CliError, SelftestOptions};
use kamforge::series::{flow_apply, Generator, PoissonSeries, SeriesError};

/// Result codes of every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or a document that fails schema validation.
    Schema = 3,
    /// The computation ran and failed; for scenarios the report is still returned.
    Computation = 4,
    /// Operands live in different series spaces.
    Mismatch = 5,
    Io = 6,
    Panic = 7,
}

/// Opaque truncated Poisson series.
pub struct KfSeries {
    inner: PoissonSeries,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("nul bytes removed")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: KfStatus, msg: impl Into<String>) -> KfStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> KfStatus) -> KfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            fail(KfStatus::Panic, format!("panic: {}", msg.unwrap_or_default()))
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, KfStatus> {
    if s.is_null() {
        return Err(fail(KfStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(KfStatus::InvalidUtf8, e.to_string()))
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

fn series_status(e: &SeriesError) -> KfStatus {
    match e {
        SeriesError::Format(_) | SeriesError::Scalar(_) | SeriesError::OutOfWindow(_) | SeriesError::Dimension { .. } => KfStatus::Schema,
        SeriesError::ContextMismatch(_) => KfStatus::Mismatch,
        SeriesError::GeneratorOrderViolation(_) | SeriesError::InvalidTranslation { .. } => KfStatus::Computation,
    }
}

/// Message of the last failed call on this thread, or null. Owned by the library; valid
/// until the next call on the same thread.
#[no_mangle]
pub extern "C" fn kf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the canonical series JSON into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_series_from_json(json: *const c_char, out: *mut *mut KfSeries) -> KfStatus {
    guard(|| {
        if out.is_null() {
            return fail(KfStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match PoissonSeries::from_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(KfSeries { inner }));
                KfStatus::Ok
            }
            Err(e) => fail(series_status(&e), e.to_string()),
        }
    })
}

/// Canonical JSON of `s`; free the result with [`kf_string_free`].
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_series_to_json(s: *const KfSeries, out: *mut *mut c_char) -> KfStatus {
    guard(|| {
        if s.is_null() || out.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        *out = into_c((*s).inner.to_json());
        KfStatus::Ok
    })
}

/// Number of stored (nonzero) terms, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_series_len(s: *const KfSeries) -> usize {
    s.as_ref().map_or(0, |s| s.inner.len())
}

/// # Safety
/// `s` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn kf_series_free(s: *mut KfSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

unsafe fn binary(
    a: *const KfSeries,
    b: *const KfSeries,
    out: *mut *mut KfSeries,
    op: impl FnOnce(&PoissonSeries, &PoissonSeries) -> Result<PoissonSeries, SeriesError>,
) -> KfStatus {
    guard(|| {
        if a.is_null() || b.is_null() || out.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        match op(&(*a).inner, &(*b).inner) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(KfSeries { inner }));
                KfStatus::Ok
            }
            Err(e) => fail(series_status(&e), e.to_string()),
        }
    })
}

/// `a + b` as a new handle.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_series_add(a: *const KfSeries, b: *const KfSeries, out: *mut *mut KfSeries) -> KfStatus {
    binary(a, b, out, |a, b| a.add(b))
}

/// Truncated product `a·b`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_series_mul(a: *const KfSeries, b: *const KfSeries, out: *mut *mut KfSeries) -> KfStatus {
    binary(a, b, out, |a, b| a.mul(b))
}

/// Poisson bracket `{a, b}`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_series_bracket(a: *const KfSeries, b: *const KfSeries, out: *mut *mut KfSeries) -> KfStatus {
    binary(a, b, out, |a, b| a.bracket(b))
}

/// `exp(ad_S) f` for a Hamiltonian generator `S`.
///
/// # Safety
/// `generator`, `f` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_series_flow(generator: *const KfSeries, f: *const KfSeries, out: *mut *mut KfSeries) -> KfStatus {
    binary(generator, f, out, |s, f| flow_apply(&Generator::Hamiltonian(s.clone()), f))
}

/// Exact equality of two series (same space and coefficients). Null handles compare unequal.
///
/// # Safety
/// `a`, `b` must be null or live handles.
#[no_mangle]
pub unsafe extern "C" fn kf_series_equal(a: *const KfSeries, b: *const KfSeries) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.inner == b.inner,
        _ => false,
    }
}

/// Runs a scenario document and returns its JSON report in `report`.
///
/// Returns `Computation` when the scenario failed but a report was produced, `Schema` (with
/// no report) for invalid documents.
///
/// # Safety
/// `scenario_json` must be a NUL-terminated string; `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_run_scenario(scenario_json: *const c_char, report: *mut *mut c_char) -> KfStatus {
    guard(|| {
        if report.is_null() {
            return fail(KfStatus::NullPointer, "null output pointer");
        }
        *report = ptr::null_mut();
        let text = match read_str(scenario_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match run_scenario_str(text) {
            Ok(outcome) => {
                *report = into_c(render(&outcome.report));
                if outcome.ok {
                    KfStatus::Ok
                } else {
                    fail(KfStatus::Computation, outcome.report["error"]["message"].as_str().unwrap_or("computation failed").to_string())
                }
            }
            Err(e @ CliError::Schema(_)) => fail(KfStatus::Schema, e.to_string()),
            Err(e) => fail(KfStatus::Io, e.to_string()),
        }
    })
}

/// Runs a scenario file and writes the report atomically to `out_path`.
///
/// # Safety
/// Both paths must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn kf_run_scenario_file(path: *const c_char, out_path: *const c_char) -> KfStatus {
    guard(|| {
        let (p, o) = match (read_str(path), read_str(out_path)) {
            (Ok(p), Ok(o)) => (p, o),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match kamforge::cli::run_scenario(Path::new(p), Some(Path::new(o))) {
            Ok(outcome) if outcome.ok => KfStatus::Ok,
            Ok(_) => fail(KfStatus::Computation, "computation failed; see report"),
            Err(e @ CliError::Schema(_)) => fail(KfStatus::Schema, e.to_string()),
            Err(e) => fail(KfStatus::Io, e.to_string()),
        }
    })
}

/// Invariant suite report as JSON. Returns `Computation` if any property failed.
///
/// # Safety
/// `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_selftest(seed: u64, report: *mut *mut c_char) -> KfStatus {
    guard(|| {
        if report.is_null() {
            return fail(KfStatus::NullPointer, "null output pointer");
        }
        let r = selftest_report(&SelftestOptions { seed, mutate_bracket_sign: false });
        let ok = r["status"] == "ok";
        *report = into_c(render(&r));
        if ok {
            KfStatus::Ok
        } else {
            fail(KfStatus::Computation, "self-test property failed")
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_status_codes() {
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let s = guard(|| panic!("boom"));
        std::panic::set_hook(prev);
        assert_eq!(s, KfStatus::Panic);
        let msg = unsafe { CStr::from_ptr(kf_last_error()) }.to_str().unwrap().to_owned();
        assert_eq!(msg, "panic: boom");
        assert_eq!(guard(|| KfStatus::Ok), KfStatus::Ok);
        assert!(kf_last_error().is_null());
    }

    #[test]
    fn interior_nul_is_replaced() {
        let p = into_c("a\0b".into());
        assert_eq!(unsafe { CStr::from_ptr(p) }.to_str().unwrap(), "a b");
        unsafe { kf_string_free(p) };
    }
}
