//! C ABI for the hde library. Systems and codes are opaque handles created
//! from files; every function returns an `HdeStatus` and writes results
//! through out-pointers. The most recent error message per thread is
//! available via `hde_last_error`.
//!
//! Pointer contract for every function: handles must come from the matching
//! `_load` call and not have been freed; out-pointers must be valid for
//! writes; word buffers must hold exactly the code's coordinate count.

#![allow(clippy::missing_safety_doc)]

use hde::code::{LinearCodeModel, Word, DEFAULT_CODEWORD_CAP};
use hde::expansion::certify_hde;
use hde::graph::GraphLimits;
use hde::ratio::{rat, rat_to_f64, Rat};
use hde::system::TwoLayerSystem;
use libc::{c_char, size_t};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

/// Status codes returned by every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HdeStatus {
    Ok = 0,
    DomainError = 1,
    CapacityError = 2,
    PreconditionError = 3,
    ParseError = 4,
    IoError = 5,
    InvalidArgument = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let cstring = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(cstring));
}

fn status_of(err: &hde::Error) -> HdeStatus {
    match err {
        hde::Error::Domain(_) => HdeStatus::DomainError,
        hde::Error::Capacity(_) => HdeStatus::CapacityError,
        hde::Error::Precondition(_) => HdeStatus::PreconditionError,
        hde::Error::Parse { .. } => HdeStatus::ParseError,
        hde::Error::Io(_) => HdeStatus::IoError,
    }
}

fn guard<F: FnOnce() -> HdeStatus>(f: F) -> HdeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("panic across the FFI boundary".to_string());
            HdeStatus::Panic
        }
    }
}

/// Opaque two-layer system handle.
pub struct HdeSystem(TwoLayerSystem);

/// Opaque modelled-code handle.
pub struct HdeCode(LinearCodeModel);

/// A rational result as a (numerator, denominator) pair of 64-bit integers;
/// `approx` carries the f64 value (exact when representable).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HdeRational {
    pub numer: i64,
    pub denom: i64,
    pub approx: f64,
}

fn rational_out(r: &Rat) -> HdeRational {
    let (numer, denom) = hde::ratio::rat_to_i64_pair(r).unwrap_or((i64::MAX, i64::MAX));
    HdeRational {
        numer,
        denom,
        approx: rat_to_f64(r),
    }
}

unsafe fn path_from(ptr: *const c_char) -> Result<&'static Path, HdeStatus> {
    if ptr.is_null() {
        set_error("null path".to_string());
        return Err(HdeStatus::InvalidArgument);
    }
    match unsafe { CStr::from_ptr(ptr) }.to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => {
            set_error("path is not valid UTF-8".to_string());
            Err(HdeStatus::InvalidArgument)
        }
    }
}

/// Copies the most recent error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length.
#[no_mangle]
pub unsafe extern "C" fn hde_last_error(buf: *mut c_char, len: size_t) -> size_t {
    LAST_ERROR.with(|e| {
        let borrowed = e.borrow();
        let Some(msg) = borrowed.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                *buf.add(n - 1) = 0;
            }
        }
        bytes.len() - 1
    })
}

/// Loads and validates a two-layer system from a `#tls v1` file.
#[no_mangle]
pub unsafe extern "C" fn hde_system_load(
    path: *const c_char,
    out: *mut *mut HdeSystem,
) -> HdeStatus {
    guard(|| {
        let path = match unsafe { path_from(path) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null out-pointer".to_string());
            return HdeStatus::InvalidArgument;
        }
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                set_error(format!("cannot read {}: {e}", path.display()));
                return HdeStatus::IoError;
            }
        };
        match hde::io::parse_system(&text) {
            Ok(system) => {
                unsafe { *out = Box::into_raw(Box::new(HdeSystem(system))) };
                HdeStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn hde_system_free(sys: *mut HdeSystem) {
    if !sys.is_null() {
        drop(unsafe { Box::from_raw(sys) });
    }
}

/// Writes the inferred parameters (s, k, K) of the system.
#[no_mangle]
pub unsafe extern "C" fn hde_system_params(
    sys: *const HdeSystem,
    s: *mut size_t,
    k: *mut size_t,
    big_k: *mut size_t,
) -> HdeStatus {
    guard(|| {
        if sys.is_null() || s.is_null() || k.is_null() || big_k.is_null() {
            set_error("null argument".to_string());
            return HdeStatus::InvalidArgument;
        }
        let system = unsafe { &(*sys).0 };
        let (ps, pk, pkk) = system.params();
        unsafe {
            *s = ps;
            *k = pk;
            *big_k = pkk;
        }
        HdeStatus::Ok
    })
}

/// Certifies the HDE condition at λ = numer/denom. Writes the overall verdict.
#[no_mangle]
pub unsafe extern "C" fn hde_system_certify(
    sys: *const HdeSystem,
    lambda_numer: i64,
    lambda_denom: i64,
    passed: *mut bool,
) -> HdeStatus {
    guard(|| {
        if sys.is_null() || passed.is_null() {
            set_error("null argument".to_string());
            return HdeStatus::InvalidArgument;
        }
        if lambda_denom == 0 {
            set_error("lambda denominator is zero".to_string());
            return HdeStatus::InvalidArgument;
        }
        let lambda = rat(lambda_numer, lambda_denom);
        let system = unsafe { &(*sys).0 };
        let cert = certify_hde(system, &lambda, &GraphLimits::default());
        unsafe { *passed = cert.passed };
        HdeStatus::Ok
    })
}

/// Loads a modelled code from a `#code v1` file (its system is resolved
/// relative to the file's directory).
#[no_mangle]
pub unsafe extern "C" fn hde_code_load(path: *const c_char, out: *mut *mut HdeCode) -> HdeStatus {
    guard(|| {
        let path = match unsafe { path_from(path) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null out-pointer".to_string());
            return HdeStatus::InvalidArgument;
        }
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                set_error(format!("cannot read {}: {e}", path.display()));
                return HdeStatus::IoError;
            }
        };
        let base = path.parent().unwrap_or(Path::new("."));
        match hde::io::parse_code(&text, base) {
            Ok(code) => {
                unsafe { *out = Box::into_raw(Box::new(HdeCode(code))) };
                HdeStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn hde_code_free(code: *mut HdeCode) {
    if !code.is_null() {
        drop(unsafe { Box::from_raw(code) });
    }
}

/// Number of coordinates (vertices) of the code.
#[no_mangle]
pub unsafe extern "C" fn hde_code_len(code: *const HdeCode, len: *mut size_t) -> HdeStatus {
    guard(|| {
        if code.is_null() || len.is_null() {
            set_error("null argument".to_string());
            return HdeStatus::InvalidArgument;
        }
        unsafe { *len = (*code).0.vertex_count() };
        HdeStatus::Ok
    })
}

unsafe fn word_from(
    code: &LinearCodeModel,
    word: *const u64,
    len: size_t,
) -> Result<Word, HdeStatus> {
    if word.is_null() {
        set_error("null word".to_string());
        return Err(HdeStatus::InvalidArgument);
    }
    if len != code.vertex_count() {
        set_error(format!(
            "word length {len} does not match the {} coordinates",
            code.vertex_count()
        ));
        return Err(HdeStatus::InvalidArgument);
    }
    let values = unsafe { std::slice::from_raw_parts(word, len) };
    Ok(Word(values.to_vec()))
}

/// Weighted rejection rej(c) of the word.
#[no_mangle]
pub unsafe extern "C" fn hde_code_rej(
    code: *const HdeCode,
    word: *const u64,
    len: size_t,
    out: *mut HdeRational,
) -> HdeStatus {
    guard(|| {
        if code.is_null() || out.is_null() {
            set_error("null argument".to_string());
            return HdeStatus::InvalidArgument;
        }
        let code = unsafe { &(*code).0 };
        let w = match unsafe { word_from(code, word, len) } {
            Ok(w) => w,
            Err(s) => return s,
        };
        match code.rej(&w) {
            Ok(r) => {
                unsafe { *out = rational_out(&r) };
                HdeStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Bit-flip correction in place at δ = numer/denom; writes the flip count.
#[no_mangle]
pub unsafe extern "C" fn hde_code_correct(
    code: *const HdeCode,
    word: *mut u64,
    len: size_t,
    delta_numer: i64,
    delta_denom: i64,
    flips: *mut size_t,
) -> HdeStatus {
    guard(|| {
        if code.is_null() || flips.is_null() {
            set_error("null argument".to_string());
            return HdeStatus::InvalidArgument;
        }
        if delta_denom == 0 {
            set_error("delta denominator is zero".to_string());
            return HdeStatus::InvalidArgument;
        }
        let code = unsafe { &(*code).0 };
        let w = match unsafe { word_from(code, word as *const u64, len) } {
            Ok(w) => w,
            Err(s) => return s,
        };
        let delta = rat(delta_numer, delta_denom);
        match code.bitflip_correct(&w, &delta) {
            Ok((fixed, log)) => {
                unsafe {
                    std::ptr::copy_nonoverlapping(fixed.0.as_ptr(), word, len);
                    *flips = log.len();
                }
                HdeStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Distance-theorem check: writes the bound, the true distance (0/0 when the
/// code has no nonzero codeword) and the verdict.
#[no_mangle]
pub unsafe extern "C" fn hde_code_distance_check(
    code: *const HdeCode,
    bound: *mut HdeRational,
    true_distance: *mut HdeRational,
    holds: *mut bool,
) -> HdeStatus {
    guard(|| {
        if code.is_null() || bound.is_null() || true_distance.is_null() || holds.is_null() {
            set_error("null argument".to_string());
            return HdeStatus::InvalidArgument;
        }
        let code = unsafe { &(*code).0 };
        match code.distance_bound_check(&GraphLimits::default(), DEFAULT_CODEWORD_CAP) {
            Ok(report) => {
                unsafe {
                    *bound = rational_out(&report.bound);
                    *true_distance = report.true_distance.as_ref().map_or(
                        HdeRational {
                            numer: 0,
                            denom: 0,
                            approx: f64::NAN,
                        },
                        rational_out,
                    );
                    *holds = report.holds;
                }
                HdeStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}
