//! C ABI over `noma-core`.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Every fallible call returns a
//! [`NomaStatus`]; on failure [`noma_last_error`] describes the error on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use noma_core::config::Config;
use noma_core::schemes::{noma_jt_rates, supported_users, SchemeId, TwoCellScalarChannels};
use noma_core::sim::{run_trials, summarize_cdf, CdfSummary};
use noma_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NomaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    Config = 4,
    Dimension = 5,
    UnknownScheme = 6,
    Io = 7,
    OutOfRange = 8,
    Panic = 9,
}

/// Experiment configuration.
pub struct NomaConfig {
    inner: Config,
}

/// Per-scheme throughput summaries of one simulation run.
pub struct NomaResults {
    schemes: Vec<SchemeId>,
    names: Vec<CString>,
    summaries: Vec<CdfSummary>,
    skipped: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: NomaStatus, msg: impl Into<String>) -> NomaStatus {
    set_error(msg.into());
    status
}

fn from_core(e: Error) -> NomaStatus {
    let status = match e {
        Error::Config(_) => NomaStatus::Config,
        Error::Dimension(_) => NomaStatus::Dimension,
        Error::UnknownScheme(_) => NomaStatus::UnknownScheme,
        Error::Io(_) => NomaStatus::Io,
        _ => NomaStatus::Domain,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> NomaStatus) -> NomaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(NomaStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, NomaStatus> {
    if s.is_null() {
        return Err(fail(NomaStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(NomaStatus::InvalidUtf8, "string argument is not UTF-8"))
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(NomaStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn noma_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Default configuration. Never NULL.
#[no_mangle]
pub extern "C" fn noma_config_default() -> *mut NomaConfig {
    Box::into_raw(Box::new(NomaConfig { inner: Config::default() }))
}

/// Parses a TOML configuration.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noma_config_from_toml(text: *const c_char, out: *mut *mut NomaConfig) -> NomaStatus {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Config::from_toml(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(NomaConfig { inner }));
                NomaStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `cfg` must come from this library and not be used afterwards. NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn noma_config_free(cfg: *mut NomaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn noma_config_set_trials(cfg: *mut NomaConfig, trials: u64) -> NomaStatus {
    guard(|| {
        non_null!(cfg);
        if trials == 0 {
            return fail(NomaStatus::Config, "trials must be >= 1");
        }
        (*cfg).inner.harness.trials = trials as usize;
        NomaStatus::Ok
    })
}

/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn noma_config_set_seed(cfg: *mut NomaConfig, seed: u64) -> NomaStatus {
    guard(|| {
        non_null!(cfg);
        (*cfg).inner.harness.seed = seed;
        NomaStatus::Ok
    })
}

/// `0` uses one worker per core.
///
/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn noma_config_set_workers(cfg: *mut NomaConfig, workers: u32) -> NomaStatus {
    guard(|| {
        non_null!(cfg);
        (*cfg).inner.harness.workers = workers as usize;
        NomaStatus::Ok
    })
}

/// Comma-separated scheme names; an empty list enables every scheme.
///
/// # Safety
/// `cfg` must be a live configuration handle and `list` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn noma_config_set_schemes(cfg: *mut NomaConfig, list: *const c_char) -> NomaStatus {
    guard(|| {
        non_null!(cfg);
        let list = match read_str(list) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match SchemeId::parse_list(list) {
            Ok(ids) => {
                (*cfg).inner.schemes.enabled = ids;
                NomaStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Runs the Monte Carlo experiment described by `cfg`.
///
/// # Safety
/// `cfg` must be a live configuration handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noma_simulate(cfg: *const NomaConfig, out: *mut *mut NomaResults) -> NomaStatus {
    guard(|| {
        non_null!(cfg, out);
        *out = ptr::null_mut();
        let sim = (*cfg).inner.sim_config();
        let set = match run_trials(&sim) {
            Ok(s) => s,
            Err(e) => return from_core(e),
        };
        let mut summaries = Vec::with_capacity(set.schemes.len());
        for s in &set.samples {
            let rates: Vec<f64> = s.iter().map(|x| x.rate_bps_hz).collect();
            match summarize_cdf(&rates) {
                Ok(c) => summaries.push(c),
                Err(e) => return from_core(e),
            }
        }
        let names = set
            .schemes
            .iter()
            .map(|id| CString::new(id.name()).expect("scheme names have no NUL"))
            .collect();
        *out = Box::into_raw(Box::new(NomaResults {
            schemes: set.schemes,
            names,
            summaries,
            skipped: set.skipped,
        }));
        NomaStatus::Ok
    })
}

/// # Safety
/// `res` must come from [`noma_simulate`] and not be used afterwards. NULL
/// is ignored.
#[no_mangle]
pub unsafe extern "C" fn noma_results_free(res: *mut NomaResults) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Number of schemes in `res`; 0 for NULL.
///
/// # Safety
/// `res` must be NULL or a live results handle.
#[no_mangle]
pub unsafe extern "C" fn noma_results_scheme_count(res: *const NomaResults) -> usize {
    res.as_ref().map_or(0, |r| r.schemes.len())
}

/// Trials dropped because a scheme failed on them; 0 for NULL.
///
/// # Safety
/// `res` must be NULL or a live results handle.
#[no_mangle]
pub unsafe extern "C" fn noma_results_skipped(res: *const NomaResults) -> usize {
    res.as_ref().map_or(0, |r| r.skipped)
}

/// Name of scheme `index`, or NULL when out of range. Owned by `res`.
///
/// # Safety
/// `res` must be NULL or a live results handle.
#[no_mangle]
pub unsafe extern "C" fn noma_results_scheme_name(res: *const NomaResults, index: usize) -> *const c_char {
    res.as_ref()
        .and_then(|r| r.names.get(index))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Mean, 5th percentile and sample count of the user throughput
/// (bits/s/Hz) of scheme `index`. Output pointers may be NULL.
///
/// # Safety
/// `res` must be a live results handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn noma_results_summary(
    res: *const NomaResults,
    index: usize,
    mean: *mut f64,
    p05: *mut f64,
    samples: *mut usize,
) -> NomaStatus {
    guard(|| {
        non_null!(res);
        let Some(c) = (&*res).summaries.get(index) else {
            return fail(NomaStatus::OutOfRange, format!("scheme index {index} out of range"));
        };
        if !mean.is_null() {
            *mean = c.mean();
        }
        if !p05.is_null() {
            *p05 = c.percentile(5.0);
        }
        if !samples.is_null() {
            *samples = c.samples().len();
        }
        NomaStatus::Ok
    })
}

/// `½·log2(1 + snr)`; NaN for negative or non-finite input.
#[no_mangle]
pub extern "C" fn noma_capacity(snr: f64) -> f64 {
    match noma_core::Snr::new(snr) {
        Ok(s) => noma_core::shannon_rate(s).value(),
        Err(_) => f64::NAN,
    }
}

/// NOMA-JT rates of two center users and one common edge user.
/// `gains` holds `g11, g12, g21, g22, ge1, ge2`.
///
/// # Safety
/// `gains` must point to 6 readable doubles and the outputs must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn noma_jt(
    gains: *const f64,
    p_center: f64,
    p_edge: f64,
    r1: *mut f64,
    r2: *mut f64,
    r_edge: *mut f64,
) -> NomaStatus {
    guard(|| {
        non_null!(gains, r1, r2, r_edge);
        let g = std::slice::from_raw_parts(gains, 6);
        match TwoCellScalarChannels::new(g[0], g[1], g[2], g[3], g[4], g[5], p_center, p_edge) {
            Ok(ch) => {
                let p = noma_jt_rates(&ch);
                *r1 = p.r1;
                *r2 = p.r2;
                *r_edge = p.edge.unwrap_or(0.0);
                NomaStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Users supported by `scheme` with `antennas` per node. Writes `-1` for a
/// scheme that only has an upper bound.
///
/// # Safety
/// `scheme` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn noma_supported_users(
    scheme: *const c_char,
    antennas: u32,
    jt_4k: bool,
    out: *mut i64,
) -> NomaStatus {
    guard(|| {
        non_null!(out);
        let name = match read_str(scheme) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let id: SchemeId = match name.parse() {
            Ok(id) => id,
            Err(e) => return from_core(e),
        };
        *out = supported_users(id, antennas as usize, jt_4k).total().map_or(-1, |n| n as i64);
        NomaStatus::Ok
    })
}
