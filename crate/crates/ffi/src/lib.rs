//! C ABI over `subdens`.
//!
//! Every fallible call returns an [`SdStatus`]; on failure the message is kept
//! per thread and read with [`sd_last_error_message`]. Handles are opaque and
//! must be released with their `_free` function. Strings returned as
//! `*mut c_char` are owned by the caller and released with [`sd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use subdens::moments;
use subdens::rng::SeedSpec;
use subdens::samplers::{sample_bernoulli, sample_uniform};
use subdens::smallcancel::{
    max_piece_ratio, parse_presentation, satisfies_c_prime_with, thresholds, PieceRule, RelatorSet,
};
use subdens::universe::UniverseSize;
use subdens::words::count_cyclically_reduced;
use subdens::{Error, SubsetSample};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Overflow = 4,
    Internal = 5,
}

/// Piece rule for [`sd_relator_set_c_prime`]: `|p| < λ|r|`.
pub const SD_RULE_CLASSICAL: u32 = 0;
/// Piece rule for [`sd_relator_set_c_prime`]: `|p| ≤ λ|r|`.
pub const SD_RULE_NON_STRICT: u32 = 1;

pub struct SdSubset(SubsetSample);

pub struct SdRelatorSet(RelatorSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> SdStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => SdStatus::Parse,
        Error::Overflow(_) => SdStatus::Overflow,
        Error::Domain(_) | Error::Config(_) => SdStatus::InvalidArgument,
        Error::Io(_) | Error::Csv(_) => SdStatus::Internal,
    }
}

/// Runs `f`, mapping errors and panics to a status with the message recorded.
fn guard(f: impl FnOnce() -> Result<(), (SdStatus, String)>) -> SdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SdStatus::Internal
        }
    }
}

fn lib<T>(r: subdens::Result<T>) -> Result<T, (SdStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, (SdStatus, String)> {
    // SAFETY: the caller passes either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| (SdStatus::NullPointer, format!("`{name}` is null")))
}

fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, (SdStatus, String)> {
    // SAFETY: the caller passes either null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| (SdStatus::NullPointer, format!("`{name}` is null")))
}

fn owned_string(s: String) -> Result<*mut c_char, (SdStatus, String)> {
    CString::new(s).map(CString::into_raw).map_err(|_| (SdStatus::Internal, "interior NUL in output".into()))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Uniform `k`-subset of `{0..n-1}`.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_subset_sample_uniform(
    n: u64,
    k: u64,
    seed: u64,
    stream: u64,
    result: *mut *mut SdSubset,
) -> SdStatus {
    guard(|| {
        let slot = out(result, "result")?;
        let s = lib(UniverseSize::new(n).and_then(|u| sample_uniform(u, k, SeedSpec::new(seed, stream))))?;
        *slot = Box::into_raw(Box::new(SdSubset(s)));
        Ok(())
    })
}

/// Bernoulli subset with inclusion probability `n^{d-1}`.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_subset_sample_bernoulli(
    n: u64,
    d: f64,
    seed: u64,
    stream: u64,
    result: *mut *mut SdSubset,
) -> SdStatus {
    guard(|| {
        let slot = out(result, "result")?;
        let s = lib(UniverseSize::new(n).and_then(|u| sample_bernoulli(u, d, SeedSpec::new(seed, stream))))?;
        *slot = Box::into_raw(Box::new(SdSubset(s)));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_subset_free(s: *mut SdSubset) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Cardinality of `s`; 0 for a null handle.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_subset_len(s: *const SdSubset) -> u64 {
    handle(s, "s").map_or(0, |s| s.0.len() as u64)
}

/// Copies up to `cap` sorted members into `buf`; `written` receives the count.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_subset_members(
    s: *const SdSubset,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> SdStatus {
    guard(|| {
        let s = handle(s, "s")?;
        let w = out(written, "written")?;
        let members = s.0.members();
        let count = members.len().min(cap);
        if count > 0 {
            if buf.is_null() {
                return Err((SdStatus::NullPointer, "`buf` is null".into()));
            }
            // SAFETY: the caller guarantees `buf` holds at least `cap` elements.
            unsafe { ptr::copy_nonoverlapping(members.as_ptr(), buf, count) };
        }
        *w = count;
        Ok(())
    })
}

/// Density `log_n |s|`; negative infinity for the empty set.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_subset_density(s: *const SdSubset, result: *mut f64) -> SdStatus {
    guard(|| {
        *out(result, "result")? = handle(s, "s")?.0.density().as_f64();
        Ok(())
    })
}

/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_subset_intersection_len(
    a: *const SdSubset,
    b: *const SdSubset,
    result: *mut u64,
) -> SdStatus {
    guard(|| {
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        *out(result, "result")? = lib(a.0.intersection_len(&b.0))? as u64;
        Ok(())
    })
}

/// Exact mean and variance of `|A ∩ B|` for uniform subsets of sizes `ka`, `kb`.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_intersection_moments_uniform(
    n: u64,
    ka: u64,
    kb: u64,
    mean: *mut f64,
    variance: *mut f64,
) -> SdStatus {
    guard(|| {
        let (mean, variance) = (out(mean, "mean")?, out(variance, "variance")?);
        let m = lib(UniverseSize::new(n).and_then(|u| moments::intersection_moments_uniform(u, ka, kb)))?;
        *mean = m.mean;
        *variance = m.variance;
        Ok(())
    })
}

/// Threshold constants for rank `m` as a JSON object.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_thresholds_json(m: u32, epsilon: f64, result: *mut *mut c_char) -> SdStatus {
    guard(|| {
        let slot = out(result, "result")?;
        let t = lib(thresholds(m, epsilon))?;
        *slot = owned_string(lib(serde_json::to_string(&t).map_err(Error::from))?)?;
        Ok(())
    })
}

/// Decimal count of cyclically reduced words of length exactly `t` over `m`
/// generators; the exact values overflow any fixed-width integer.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_word_count(m: u32, t: usize, result: *mut *mut c_char) -> SdStatus {
    guard(|| {
        let slot = out(result, "result")?;
        if t == 0 {
            return Err((SdStatus::InvalidArgument, "length must be at least 1".into()));
        }
        let table = lib(count_cyclically_reduced(m, t))?;
        *slot = owned_string(table.exact(t).to_string())?;
        Ok(())
    })
}

/// Parses a presentation (`rank m` line, then one relator per line).
///
/// # Safety
/// `text` must be null or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sd_relator_set_parse(text: *const c_char, result: *mut *mut SdRelatorSet) -> SdStatus {
    guard(|| {
        let slot = out(result, "result")?;
        if text.is_null() {
            return Err((SdStatus::NullPointer, "`text` is null".into()));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|_| (SdStatus::Parse, "text is not UTF-8".into()))?;
        *slot = Box::into_raw(Box::new(SdRelatorSet(lib(parse_presentation(text))?)));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_relator_set_free(r: *mut SdRelatorSet) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of relators; 0 for a null handle.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_relator_set_len(r: *const SdRelatorSet) -> usize {
    handle(r, "r").map_or(0, |r| r.0.len())
}

/// Largest `|p| / |r|` over pieces `p` hosted by relators `r`.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_relator_set_max_piece_ratio(r: *const SdRelatorSet, result: *mut f64) -> SdStatus {
    guard(|| {
        *out(result, "result")? = max_piece_ratio(&handle(r, "r")?.0).max_ratio;
        Ok(())
    })
}

/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn sd_relator_set_c_prime(
    r: *const SdRelatorSet,
    lambda: f64,
    rule: u32,
    holds: *mut bool,
) -> SdStatus {
    guard(|| {
        let r = handle(r, "r")?;
        let holds = out(holds, "holds")?;
        let rule = match rule {
            SD_RULE_CLASSICAL => PieceRule::Classical,
            SD_RULE_NON_STRICT => PieceRule::NonStrict,
            other => return Err((SdStatus::InvalidArgument, format!("unknown piece rule {other}"))),
        };
        *holds = lib(satisfies_c_prime_with(&r.0, lambda, rule))?.holds;
        Ok(())
    })
}
