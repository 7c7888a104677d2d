//! C ABI over the platoon miners.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `_free` function. Every fallible call returns a
//! `PlatoonStatus`; on failure `platoon_last_error()` describes the problem
//! until the next call on the same thread. Strings returned by the library
//! stay valid as long as the handle they came from.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use platoon::frb::{mine_frb, FrbOptions};
use platoon::io::{load_dataset, parse_paths, write_patterns, Provenance};
use platoon::maxgrowth::{mine_maxgrowth, MaxGrowthOptions};
use platoon::oracle::{mine_bruteforce, OracleLimits};
use platoon::{Dataset, Error, MiningOutput, MiningParams};

/// Result codes.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PlatoonStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed file, bad parameter or other rejected input.
    InvalidInput = 3,
    /// The brute-force miner refused an instance that is too large.
    LimitExceeded = 4,
    Io = 5,
    IndexOutOfRange = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PlatoonAlgorithm {
    Maxgrowth = 0,
    Frb = 1,
    Oracle = 2,
}

/// Mining thresholds; `eps` is in dataset ticks.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PlatoonParams {
    pub m: usize,
    pub k: usize,
    pub d: usize,
    pub eps: i64,
}

/// A loaded set of travel paths.
pub struct PlatoonDataset {
    inner: Dataset,
}

/// Maximal patterns of one mining run, with their serialized form.
pub struct PlatoonResult {
    jsonl: CString,
    sizes: Vec<(usize, usize)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> PlatoonStatus {
    match e {
        Error::LimitExceeded { .. } => PlatoonStatus::LimitExceeded,
        Error::Io { .. } => PlatoonStatus::Io,
        _ => PlatoonStatus::InvalidInput,
    }
}

fn fail(status: PlatoonStatus, msg: impl Into<String>) -> PlatoonStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> PlatoonStatus) -> PlatoonStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PlatoonStatus::Internal, "internal error"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, PlatoonStatus> {
    if p.is_null() {
        return Err(fail(PlatoonStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(PlatoonStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn store_dataset(res: platoon::Result<Dataset>, out: *mut *mut PlatoonDataset) -> PlatoonStatus {
    match res {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(PlatoonDataset { inner })) };
            PlatoonStatus::Ok
        }
        Err(e) => fail(status_of(&e), e.to_string()),
    }
}

/// Reads a paths file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn platoon_dataset_load(path: *const c_char, out: *mut *mut PlatoonDataset) -> PlatoonStatus {
    guard(|| {
        if out.is_null() {
            return fail(PlatoonStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        match str_arg(path, "path") {
            Ok(p) => store_dataset(load_dataset(p), out),
            Err(s) => s,
        }
    })
}

/// Parses the text of a paths file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn platoon_dataset_parse(text: *const c_char, out: *mut *mut PlatoonDataset) -> PlatoonStatus {
    guard(|| {
        if out.is_null() {
            return fail(PlatoonStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        match str_arg(text, "text") {
            Ok(t) => store_dataset(parse_paths(t), out),
            Err(s) => s,
        }
    })
}

/// Number of objects, 0 for a null handle.
///
/// # Safety
/// `dataset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn platoon_dataset_num_objects(dataset: *const PlatoonDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.inner.num_objects())
}

/// # Safety
/// `dataset` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn platoon_dataset_free(dataset: *mut PlatoonDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// Mines the maximal patterns of `dataset` with all pruning enabled.
///
/// # Safety
/// `dataset` and `params` must be valid, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn platoon_mine(
    dataset: *const PlatoonDataset,
    params: *const PlatoonParams,
    algorithm: PlatoonAlgorithm,
    out: *mut *mut PlatoonResult,
) -> PlatoonStatus {
    guard(|| {
        if out.is_null() {
            return fail(PlatoonStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let (Some(ds), Some(p)) = (dataset.as_ref(), params.as_ref()) else {
            return fail(PlatoonStatus::NullArgument, "dataset or params is null");
        };
        let params = match MiningParams::new(p.m, p.k, p.d, p.eps) {
            Ok(x) => x,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let data = &ds.inner;
        let (name, res): (&str, platoon::Result<MiningOutput>) = match algorithm {
            PlatoonAlgorithm::Maxgrowth => ("maxgrowth", mine_maxgrowth(data, &params, MaxGrowthOptions::default())),
            PlatoonAlgorithm::Frb => ("frb", mine_frb(data, &params, FrbOptions::default())),
            PlatoonAlgorithm::Oracle => ("oracle", mine_bruteforce(data, &params, OracleLimits::default())),
        };
        let output = match res {
            Ok(o) => o,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let text = write_patterns(&Provenance::new(name, &params, data), &output.patterns, data);
        let result = PlatoonResult {
            jsonl: CString::new(text).expect("JSON output has no NUL"),
            sizes: output
                .patterns
                .iter()
                .map(|p| (p.objects.len(), p.route.len()))
                .collect(),
        };
        *out = Box::into_raw(Box::new(result));
        PlatoonStatus::Ok
    })
}

/// Number of patterns, 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn platoon_result_len(result: *const PlatoonResult) -> usize {
    result.as_ref().map_or(0, |r| r.sizes.len())
}

/// Group size and route length of pattern `index`.
///
/// # Safety
/// `result` must be a live handle; `num_objects` and `route_len` valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn platoon_result_pattern_size(
    result: *const PlatoonResult,
    index: usize,
    num_objects: *mut usize,
    route_len: *mut usize,
) -> PlatoonStatus {
    guard(|| {
        let Some(r) = result.as_ref() else {
            return fail(PlatoonStatus::NullArgument, "result is null");
        };
        if num_objects.is_null() || route_len.is_null() {
            return fail(PlatoonStatus::NullArgument, "output pointer is null");
        }
        match r.sizes.get(index) {
            Some(&(o, l)) => {
                *num_objects = o;
                *route_len = l;
                PlatoonStatus::Ok
            }
            None => fail(
                PlatoonStatus::IndexOutOfRange,
                format!("pattern {index} of {}", r.sizes.len()),
            ),
        }
    })
}

/// The patterns as JSON lines (provenance record first). Owned by the
/// result handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn platoon_result_jsonl(result: *const PlatoonResult) -> *const c_char {
    result.as_ref().map_or(ptr::null(), |r| r.jsonl.as_ptr())
}

/// # Safety
/// `result` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn platoon_result_free(result: *mut PlatoonResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn platoon_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn platoon_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
