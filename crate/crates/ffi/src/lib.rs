//! C interface to lctkit.
//!
//! Every fallible call returns an [`LctStatus`] and writes its result through
//! an out pointer. On failure the message is available from
//! [`lct_last_error`] on the same thread. Strings handed out by the library
//! must be released with [`lct_string_free`], ideals with [`lct_ideal_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use lctkit::error::Error;
use lctkit::ideal::MonomialIdeal;
use lctkit::multiplicity::{check_main_inequality, samuel_multiplicity};
use lctkit::numeric::{estimate_threshold, McConfig, PshModel, DEFAULT_BISECTION_STEPS};
use lctkit::polytope::NewtonPolytope;
use lctkit::rational;

/// Status codes. The nonzero values 1 to 4 match the exit codes of the
/// `lctkit` command.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LctStatus {
    Ok = 0,
    /// Malformed input text or an i/o failure.
    Parse = 1,
    /// Valid input outside the domain of the operation, for example an
    /// ideal that is not m-primary or mismatched dimensions.
    Domain = 2,
    /// A size or time cap was hit.
    Resource = 3,
    /// Numerical failure, internal error or a caught panic.
    Internal = 4,
    /// A required pointer was null or a string was not UTF-8.
    InvalidArgument = 5,
}

/// Opaque monomial ideal.
pub struct LctIdeal {
    inner: MonomialIdeal,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LctStatus {
    match e.exit_code() {
        1 => LctStatus::Parse,
        2 => LctStatus::Domain,
        3 => LctStatus::Resource,
        _ => LctStatus::Internal,
    }
}

enum Failure {
    Lib(Error),
    Arg(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LctStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LctStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Arg(msg))) => {
            set_error(msg.to_string());
            LctStatus::InvalidArgument
        }
        Err(_) => {
            set_error("panic inside lctkit".to_string());
            LctStatus::Internal
        }
    }
}

unsafe fn ideal_ref<'a>(p: *const LctIdeal) -> Result<&'a MonomialIdeal, Failure> {
    p.as_ref().map(|i| &i.inner).ok_or(Failure::Arg("null ideal"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Arg("null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Arg("string contains NUL"))?;
    if out.is_null() {
        return Err(Failure::Arg("null output pointer"));
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn write_ideal(out: *mut *mut LctIdeal, inner: MonomialIdeal) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Arg("null output pointer"));
    }
    out.write(Box::into_raw(Box::new(LctIdeal { inner })));
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lct_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn lct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the `.ideal` text format (a `vars n` line, then one generator per
/// line as exponent vector or monomial).
///
/// # Safety
/// `text` must be a NUL-terminated string, `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_parse(text: *const c_char, out: *mut *mut LctIdeal) -> LctStatus {
    guard(|| {
        if text.is_null() {
            return Err(Failure::Arg("null text"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| Failure::Arg("text is not UTF-8"))?;
        write_ideal(out, MonomialIdeal::parse(s)?)
    })
}

/// Builds an ideal from `count` exponent vectors of length `dim`, stored
/// row after row in `exponents`.
///
/// # Safety
/// `exponents` must point to `dim * count` readable values.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_from_exponents(
    dim: usize,
    exponents: *const u32,
    count: usize,
    out: *mut *mut LctIdeal,
) -> LctStatus {
    guard(|| {
        let len = dim.checked_mul(count).ok_or(Failure::Arg("size overflow"))?;
        if exponents.is_null() && len > 0 {
            return Err(Failure::Arg("null exponents"));
        }
        let flat = if len == 0 { &[][..] } else { std::slice::from_raw_parts(exponents, len) };
        let rows: Vec<&[u32]> = if dim == 0 { Vec::new() } else { flat.chunks(dim).collect() };
        write_ideal(out, MonomialIdeal::from_rows(dim, &rows)?)
    })
}

/// Releases an ideal. Null is ignored.
///
/// # Safety
/// `ideal` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_free(ideal: *mut LctIdeal) {
    if !ideal.is_null() {
        drop(Box::from_raw(ideal));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `ideal` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_dim(ideal: *const LctIdeal) -> usize {
    ideal.as_ref().map_or(0, |i| i.inner.dim())
}

/// Canonical text form of the ideal, for example `(x1^2, x2^3)`.
///
/// # Safety
/// `ideal` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_to_string(ideal: *const LctIdeal, out: *mut *mut c_char) -> LctStatus {
    guard(|| write_string(out, ideal_ref(ideal)?.to_string()))
}

/// # Safety
/// `ideal` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_is_m_primary(ideal: *const LctIdeal, out: *mut bool) -> LctStatus {
    guard(|| write(out, ideal_ref(ideal)?.is_m_primary()))
}

/// Number of monomials outside the ideal.
///
/// # Safety
/// `ideal` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_colength(ideal: *const LctIdeal, out: *mut u64) -> LctStatus {
    guard(|| write(out, ideal_ref(ideal)?.colength()?))
}

/// Product of two ideals as a new handle.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_product(
    a: *const LctIdeal,
    b: *const LctIdeal,
    out: *mut *mut LctIdeal,
) -> LctStatus {
    guard(|| write_ideal(out, ideal_ref(a)?.product(ideal_ref(b)?)?))
}

/// Exact log canonical threshold as a reduced fraction string such as `5/6`.
///
/// # Safety
/// `ideal` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_lct(ideal: *const LctIdeal, out: *mut *mut c_char) -> LctStatus {
    guard(|| {
        let lct = NewtonPolytope::new(ideal_ref(ideal)?)?.lct();
        write_string(out, rational::to_string(&lct))
    })
}

/// Exact Samuel multiplicity as a fraction string (always an integer).
///
/// # Safety
/// `ideal` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_multiplicity(ideal: *const LctIdeal, out: *mut *mut c_char) -> LctStatus {
    guard(|| {
        let e = samuel_multiplicity(ideal_ref(ideal)?)?;
        write_string(out, rational::to_string(&e))
    })
}

/// Full inequality report as a JSON object, the same fields as the `result`
/// of `lctkit check` without the colength entries.
///
/// # Safety
/// `ideal` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_check_json(ideal: *const LctIdeal, out: *mut *mut c_char) -> LctStatus {
    guard(|| {
        let report = check_main_inequality(ideal_ref(ideal)?)?;
        let json = serde_json::to_string(&report).map_err(|e| Error::Internal(e.to_string()))?;
        write_string(out, json)
    })
}

/// Monte Carlo bracket `[lo, hi]` for the threshold of the ideal, using the
/// default sampler settings with the given seed and sample count (0 keeps
/// the default count). `hi` is infinite when the search cap was reached.
///
/// # Safety
/// `ideal` must be a live handle, `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_estimate_threshold(
    ideal: *const LctIdeal,
    seed: u64,
    samples: usize,
    lo: *mut f64,
    hi: *mut f64,
) -> LctStatus {
    guard(|| {
        if lo.is_null() || hi.is_null() {
            return Err(Failure::Arg("null output pointer"));
        }
        let mut cfg = McConfig {
            seed,
            ..McConfig::default()
        };
        if samples > 0 {
            cfg.samples = samples;
        }
        let model = PshModel::toric(ideal_ref(ideal)?.clone(), rational::int(1))?;
        let iv = estimate_threshold(&model, None, &cfg, DEFAULT_BISECTION_STEPS)?;
        write(lo, iv.c_lo)?;
        write(hi, iv.c_hi)
    })
}
