//! C interface to `pillai-core`.
//!
//! Objects cross the boundary as opaque handles created by a `*_new` or
//! `*_run` function and released with the matching `*_free`. Every fallible
//! function returns a [`PillaiStatus`]; the message of the last failure on
//! the calling thread is available from [`pillai_last_error`].
//!
//! Strings are copied into caller buffers. A call with a too-small buffer
//! returns `PILLAI_STATUS_BUFFER_TOO_SMALL` and stores the required size,
//! terminating NUL included, in `*needed`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use pillai_core::certificate::{run_pipeline, PipelineCertificate};
use pillai_core::contfrac::{PartialQuotients, Tau};
use pillai_core::realnum::PrecisionPolicy;
use pillai_core::search::{enumerate, multi_represented, SolutionRecord};
use pillai_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PillaiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    PrecisionExhausted = 3,
    ComputationFailed = 4,
    BufferTooSmall = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Which logarithm ratio to expand.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PillaiTau {
    /// `log delta / log alpha`
    DeltaOverAlpha = 0,
    /// `log alpha / log delta`
    AlphaOverDelta = 1,
}

/// Records `c` with several representations `P_m - F_n = c`.
pub struct PillaiSearch {
    records: Vec<SolutionRecord>,
}

/// Partial quotients of a logarithm ratio.
pub struct PillaiContinuedFraction {
    quotients: PartialQuotients,
}

/// Result of the full pipeline.
pub struct PillaiCertificate {
    cert: PipelineCertificate,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let mut bytes = msg.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let s = CString::new(bytes).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> PillaiStatus {
    match e {
        Error::PrecisionExhausted { .. } => PillaiStatus::PrecisionExhausted,
        Error::InvalidInput(_) => PillaiStatus::InvalidArgument,
        _ => PillaiStatus::ComputationFailed,
    }
}

fn fail(status: PillaiStatus, msg: impl Into<String>) -> PillaiStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> PillaiStatus) -> PillaiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PillaiStatus::Panic, "internal panic"),
    }
}

/// Copy `s` plus a NUL into `buf`.
unsafe fn copy_out(s: &[u8], buf: *mut c_char, len: usize, needed: *mut usize) -> PillaiStatus {
    let want = s.len() + 1;
    if !needed.is_null() {
        *needed = want;
    }
    if buf.is_null() || len < want {
        return fail(PillaiStatus::BufferTooSmall, format!("buffer of {len} bytes, {want} needed"));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    PillaiStatus::Ok
}

/// NUL-terminated message of the last failure on this thread; empty if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pillai_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pillai_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Enumerate `4 <= m <= m_max`, `2 <= n <= n_max` and keep values with at
/// least `min_reps` representations.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn pillai_search_new(
    m_max: u64,
    n_max: u64,
    min_reps: u32,
    out: *mut *mut PillaiSearch,
) -> PillaiStatus {
    guard(|| {
        if out.is_null() {
            return fail(PillaiStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        if min_reps == 0 {
            return fail(PillaiStatus::InvalidArgument, "min_reps must be positive");
        }
        let records = multi_represented(&enumerate(0..=m_max, 0..=n_max), min_reps as usize);
        *out = Box::into_raw(Box::new(PillaiSearch { records }));
        PillaiStatus::Ok
    })
}

/// # Safety
/// `h` must come from [`pillai_search_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pillai_search_free(h: *mut PillaiSearch) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of records; 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live search handle.
#[no_mangle]
pub unsafe extern "C" fn pillai_search_len(h: *const PillaiSearch) -> usize {
    h.as_ref().map_or(0, |s| s.records.len())
}

unsafe fn record<'a>(h: *const PillaiSearch, i: usize) -> Result<&'a SolutionRecord, PillaiStatus> {
    let s = h.as_ref().ok_or_else(|| fail(PillaiStatus::NullPointer, "search handle is null"))?;
    s.records.get(i).ok_or_else(|| fail(PillaiStatus::OutOfRange, format!("record {i} of {}", s.records.len())))
}

/// The value `c` of record `i`, when it fits in 64 bits.
///
/// # Safety
/// `h` must be a live search handle, `c` writable.
#[no_mangle]
pub unsafe extern "C" fn pillai_search_value(h: *const PillaiSearch, i: usize, c: *mut i64) -> PillaiStatus {
    guard(|| {
        if c.is_null() {
            return fail(PillaiStatus::NullPointer, "c is null");
        }
        match record(h, i) {
            Ok(r) => match r.c.to_i64() {
                Some(v) => {
                    *c = v;
                    PillaiStatus::Ok
                }
                None => fail(PillaiStatus::OutOfRange, "value does not fit in 64 bits; use pillai_search_value_str"),
            },
            Err(s) => s,
        }
    })
}

/// The value `c` of record `i` in decimal.
///
/// # Safety
/// `h` must be a live search handle; `buf` must hold `len` bytes; `needed`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn pillai_search_value_str(
    h: *const PillaiSearch,
    i: usize,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> PillaiStatus {
    guard(|| match record(h, i) {
        Ok(r) => copy_out(r.c.to_string().as_bytes(), buf, len, needed),
        Err(s) => s,
    })
}

/// Number of `(m, n)` pairs of record `i`.
///
/// # Safety
/// `h` must be a live search handle, `count` writable.
#[no_mangle]
pub unsafe extern "C" fn pillai_search_pair_count(h: *const PillaiSearch, i: usize, count: *mut usize) -> PillaiStatus {
    guard(|| {
        if count.is_null() {
            return fail(PillaiStatus::NullPointer, "count is null");
        }
        match record(h, i) {
            Ok(r) => {
                *count = r.pairs.len();
                PillaiStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Pair `j` of record `i`, pairs sorted by `m`.
///
/// # Safety
/// `h` must be a live search handle, `m` and `n` writable.
#[no_mangle]
pub unsafe extern "C" fn pillai_search_pair(
    h: *const PillaiSearch,
    i: usize,
    j: usize,
    m: *mut u64,
    n: *mut u64,
) -> PillaiStatus {
    guard(|| {
        if m.is_null() || n.is_null() {
            return fail(PillaiStatus::NullPointer, "m or n is null");
        }
        match record(h, i) {
            Ok(r) => match r.pairs.get(j) {
                Some(&(pm, pn)) => {
                    *m = pm;
                    *n = pn;
                    PillaiStatus::Ok
                }
                None => fail(PillaiStatus::OutOfRange, format!("pair {j} of {}", r.pairs.len())),
            },
            Err(s) => s,
        }
    })
}

fn policy_for(precision_bits: u32) -> Result<PrecisionPolicy, PillaiStatus> {
    match precision_bits {
        0 => Ok(PrecisionPolicy::starting_at(512)),
        b if b < 64 => Err(fail(PillaiStatus::InvalidArgument, format!("precision {b} below 64 bits"))),
        b => Ok(PrecisionPolicy::fixed(b)),
    }
}

/// Expand `count` partial quotients. `precision_bits == 0` starts at 512
/// bits and escalates as needed; otherwise the precision is fixed.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pillai_cf_new(
    tau: PillaiTau,
    count: usize,
    precision_bits: u32,
    out: *mut *mut PillaiContinuedFraction,
) -> PillaiStatus {
    guard(|| {
        if out.is_null() {
            return fail(PillaiStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let policy = match policy_for(precision_bits) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let t = match tau {
            PillaiTau::DeltaOverAlpha => Tau::DeltaOverAlpha,
            PillaiTau::AlphaOverDelta => Tau::AlphaOverDelta,
        };
        match t.expand(count, policy) {
            Ok(q) if q.truncated => fail(
                PillaiStatus::PrecisionExhausted,
                format!("only {} of {count} quotients at {} bits", q.len(), q.precision_bits),
            ),
            Ok(quotients) => {
                *out = Box::into_raw(Box::new(PillaiContinuedFraction { quotients }));
                PillaiStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `h` must come from [`pillai_cf_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pillai_cf_free(h: *mut PillaiContinuedFraction) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pillai_cf_len(h: *const PillaiContinuedFraction) -> usize {
    h.as_ref().map_or(0, |c| c.quotients.len())
}

/// Partial quotient `i`; `a_0` is index 0.
///
/// # Safety
/// `h` must be a live handle, `value` writable.
#[no_mangle]
pub unsafe extern "C" fn pillai_cf_quotient(
    h: *const PillaiContinuedFraction,
    i: usize,
    value: *mut u64,
) -> PillaiStatus {
    guard(|| {
        let Some(c) = h.as_ref() else {
            return fail(PillaiStatus::NullPointer, "handle is null");
        };
        if value.is_null() {
            return fail(PillaiStatus::NullPointer, "value is null");
        }
        match c.quotients.quotients.get(i) {
            Some(q) => match q.to_u64() {
                Some(v) => {
                    *value = v;
                    PillaiStatus::Ok
                }
                None => fail(PillaiStatus::OutOfRange, format!("quotient {i} does not fit in 64 bits")),
            },
            None => fail(PillaiStatus::OutOfRange, format!("quotient {i} of {}", c.quotients.len())),
        }
    })
}

/// Run the whole pipeline. `precision_bits` as for [`pillai_cf_new`].
/// A completed run whose theorem check fails still yields a handle; query
/// [`pillai_certificate_passed`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pillai_certificate_run(precision_bits: u32, out: *mut *mut PillaiCertificate) -> PillaiStatus {
    guard(|| {
        if out.is_null() {
            return fail(PillaiStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let policy = match policy_for(precision_bits) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let cert = match run_pipeline(policy) {
            Ok(c) => c,
            Err(e) => return fail(status_of(&e.error), e.to_string()),
        };
        let json = match serde_json::to_string_pretty(&cert).map(CString::new) {
            Ok(Ok(s)) => s,
            _ => return fail(PillaiStatus::ComputationFailed, "certificate serialisation failed"),
        };
        *out = Box::into_raw(Box::new(PillaiCertificate { cert, json }));
        PillaiStatus::Ok
    })
}

/// # Safety
/// `h` must come from [`pillai_certificate_run`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pillai_certificate_free(h: *mut PillaiCertificate) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// 1 if the reduced bound is within the search and the search matched, 0
/// otherwise or for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pillai_certificate_passed(h: *const PillaiCertificate) -> i32 {
    h.as_ref().map_or(0, |c| c.cert.theorem_check.pass as i32)
}

/// Reduced bound: every solution has `n` below this.
///
/// # Safety
/// `h` must be a live handle, `bound` writable.
#[no_mangle]
pub unsafe extern "C" fn pillai_certificate_final_bound(h: *const PillaiCertificate, bound: *mut u64) -> PillaiStatus {
    guard(|| match (h.as_ref(), bound.is_null()) {
        (Some(c), false) => {
            *bound = c.cert.final_n_bound;
            PillaiStatus::Ok
        }
        _ => fail(PillaiStatus::NullPointer, "handle or bound is null"),
    })
}

/// The certificate as pretty-printed JSON.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `len` bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn pillai_certificate_json(
    h: *const PillaiCertificate,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> PillaiStatus {
    guard(|| match h.as_ref() {
        Some(c) => copy_out(c.json.as_bytes(), buf, len, needed),
        None => fail(PillaiStatus::NullPointer, "handle is null"),
    })
}

/// The certificate digest, 64 hex characters.
///
/// # Safety
/// As for [`pillai_certificate_json`].
#[no_mangle]
pub unsafe extern "C" fn pillai_certificate_digest(
    h: *const PillaiCertificate,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> PillaiStatus {
    guard(|| match h.as_ref() {
        Some(c) => copy_out(c.cert.digest.as_bytes(), buf, len, needed),
        None => fail(PillaiStatus::NullPointer, "handle is null"),
    })
}
