//! C ABI for `fintorsion`.
//!
//! Complexes are passed as opaque [`FtComplex`] handles built from JSON
//! documents. Every fallible function returns an [`FtStatus`]; on failure the
//! message is available from [`ft_last_error`] on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! must be released with [`ft_string_free`].
//!
//! Functions that need a metric use the standard inner product when the
//! document carries none.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use fintorsion::complex::{analytic_torsion, cohomology, ChainComplex};
use fintorsion::constructions::tensor_power_cyclic;
use fintorsion::document::{self, ComplexDocument};
use fintorsion::equivariant::{nrt_sigma, rt_sigma, tau_sigma_numeric, tau_sigma_spectral};
use fintorsion::verify::{self, Verdict};
use fintorsion::Error;

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed document; the message names the field.
    Document = 3,
    /// Shapes or invariants of the complex are violated.
    InvalidComplex = 4,
    /// The complex lacks a hypothesis of the computation (acyclicity,
    /// an action, a supported order).
    Precondition = 5,
    UnknownCheck = 6,
    /// A verification run produced at least one failing report.
    CheckFailed = 7,
    /// An internal error; the library state is unaffected.
    Panic = 8,
}

/// Opaque complex handle.
pub struct FtComplex {
    inner: ChainComplex,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FtStatus {
    match e {
        Error::Document { .. } => FtStatus::Document,
        Error::UnknownCheck(_) => FtStatus::UnknownCheck,
        Error::NotAcyclic { .. }
        | Error::MissingGram(_)
        | Error::MissingAction(_)
        | Error::UnsupportedOrder(_)
        | Error::NonIntegralTraces => FtStatus::Precondition,
        _ => FtStatus::InvalidComplex,
    }
}

/// Runs `f`, recording the message of any error or panic.
fn guard(f: impl FnOnce() -> Result<FtStatus, (FtStatus, String)>) -> FtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            FtStatus::Panic
        }
    }
}

fn lib<T>(r: fintorsion::Result<T>) -> Result<T, (FtStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn complex<'a>(c: *const FtComplex) -> Result<&'a ChainComplex, (FtStatus, String)> {
    c.as_ref().map(|c| &c.inner).ok_or((FtStatus::NullArgument, "null complex handle".into()))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (FtStatus, String)> {
    if s.is_null() {
        return Err((FtStatus::NullArgument, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| (FtStatus::InvalidUtf8, e.to_string()))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<FtStatus, (FtStatus, String)> {
    if out.is_null() {
        return Err((FtStatus::NullArgument, "null output pointer".into()));
    }
    *out = CString::new(s).map_err(|e| (FtStatus::Panic, e.to_string()))?.into_raw();
    Ok(FtStatus::Ok)
}

unsafe fn put_complex(out: *mut *mut FtComplex, c: ChainComplex) -> Result<FtStatus, (FtStatus, String)> {
    if out.is_null() {
        return Err((FtStatus::NullArgument, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(FtComplex { inner: c }));
    Ok(FtStatus::Ok)
}

fn metrized(c: &ChainComplex) -> ChainComplex {
    if c.has_gram() {
        c.clone()
    } else {
        c.clone().with_identity_gram()
    }
}

fn json<T: serde::Serialize>(x: &T) -> String {
    document::to_text(x)
}

/// Message of the last failure on this thread. The pointer stays valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ft_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Version of the conventions every report is stamped with.
#[no_mangle]
pub extern "C" fn ft_conventions_version() -> *const c_char {
    static V: OnceLock<CString> = OnceLock::new();
    V.get_or_init(|| CString::new(verify::CONVENTIONS_VERSION).expect("no NUL")).as_ptr()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ft_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a complex document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_complex_from_json(json: *const c_char, out: *mut *mut FtComplex) -> FtStatus {
    guard(|| {
        let doc: ComplexDocument = lib(document::parse(text(json)?))?;
        let c = lib(doc.to_complex())?;
        put_complex(out, c)
    })
}

/// # Safety
/// `c` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ft_complex_free(c: *mut FtComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of stored degrees, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ft_complex_len(c: *const FtComplex) -> usize {
    c.as_ref().map_or(0, |c| c.inner.len())
}

/// Rank in the `k`-th stored degree, or 0 when out of range.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ft_complex_rank(c: *const FtComplex, k: usize) -> usize {
    c.as_ref().and_then(|c| c.inner.ranks().get(k).copied()).unwrap_or(0)
}

/// Serializes the complex as a canonical document named `name`.
///
/// # Safety
/// `c` must be a live handle, `name` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ft_complex_to_json(c: *const FtComplex, name: *const c_char, out: *mut *mut c_char) -> FtStatus {
    guard(|| {
        let doc = ComplexDocument::from_complex(text(name)?, complex(c)?);
        put_string(out, json(&doc))
    })
}

/// Cyclic tensor power with the cyclic permutation action.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_tensor_power(c: *const FtComplex, p: u32, out: *mut *mut FtComplex) -> FtStatus {
    guard(|| {
        let t = lib(tensor_power_cyclic(complex(c)?, p))?;
        put_complex(out, t)
    })
}

/// Cohomology report as JSON.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_cohomology_json(c: *const FtComplex, out: *mut *mut c_char) -> FtStatus {
    guard(|| {
        let h = lib(cohomology(complex(c)?))?;
        put_string(out, json(&h))
    })
}

unsafe fn torsion_out(
    v: fintorsion::TorsionValue,
    log_out: *mut f64,
    json_out: *mut *mut c_char,
) -> Result<FtStatus, (FtStatus, String)> {
    if !log_out.is_null() {
        *log_out = v.log_f64();
    }
    if !json_out.is_null() {
        put_string(json_out, json(&v))?;
    }
    Ok(FtStatus::Ok)
}

/// Analytic torsion. Writes `log tau` to `log_out` and the factored value as
/// JSON to `json_out`; either may be null.
///
/// # Safety
/// `c` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_tau(c: *const FtComplex, log_out: *mut f64, json_out: *mut *mut c_char) -> FtStatus {
    guard(|| {
        let v = lib(analytic_torsion(&metrized(complex(c)?)))?;
        torsion_out(v, log_out, json_out)
    })
}

/// Exact twisted analytic torsion; fails with `Precondition` when the
/// eigenspace traces are not integral (use [`ft_tau_sigma_numeric`]).
///
/// # Safety
/// As for [`ft_tau`].
#[no_mangle]
pub unsafe extern "C" fn ft_tau_sigma(c: *const FtComplex, log_out: *mut f64, json_out: *mut *mut c_char) -> FtStatus {
    guard(|| {
        let v = lib(tau_sigma_spectral(&metrized(complex(c)?)))?;
        torsion_out(v, log_out, json_out)
    })
}

/// Enclosure `[mid - radius, mid + radius]` of `log tau_sigma` computed with
/// `bits` bits of working precision.
///
/// # Safety
/// `c` must be a live handle; `mid` and `radius` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_tau_sigma_numeric(c: *const FtComplex, bits: u64, mid: *mut f64, radius: *mut f64) -> FtStatus {
    guard(|| {
        if mid.is_null() || radius.is_null() {
            return Err((FtStatus::NullArgument, "null output pointer".into()));
        }
        let v = lib(tau_sigma_numeric(&metrized(complex(c)?), bits))?;
        *mid = v.midpoint;
        *radius = v.radius;
        Ok(FtStatus::Ok)
    })
}

/// Naive equivariant Reidemeister torsion.
///
/// # Safety
/// As for [`ft_tau`].
#[no_mangle]
pub unsafe extern "C" fn ft_nrt(c: *const FtComplex, log_out: *mut f64, json_out: *mut *mut c_char) -> FtStatus {
    guard(|| {
        let v = lib(nrt_sigma(complex(c)?))?;
        torsion_out(v, log_out, json_out)
    })
}

/// Equivariant Reidemeister torsion with metric volume forms.
///
/// # Safety
/// As for [`ft_tau`].
#[no_mangle]
pub unsafe extern "C" fn ft_rt_sigma(c: *const FtComplex, log_out: *mut f64, json_out: *mut *mut c_char) -> FtStatus {
    guard(|| {
        let v = lib(rt_sigma(&metrized(complex(c)?)))?;
        torsion_out(v, log_out, json_out)
    })
}

/// Runs `suite` (a check name or `"all"`) on `count` seeds from `seed` and
/// writes the reports as a JSON array. Returns `CheckFailed` (with the
/// reports still written) when any report fails.
///
/// # Safety
/// `suite` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_verify(suite: *const c_char, seed: u64, count: u64, out: *mut *mut c_char) -> FtStatus {
    guard(|| {
        let reports = lib(verify::run_suite(text(suite)?, seed, count))?;
        put_string(out, json(&reports))?;
        match reports.iter().filter(|r| r.verdict == Verdict::Fail).count() {
            0 => Ok(FtStatus::Ok),
            n => Err((FtStatus::CheckFailed, format!("{n} of {} reports failed", reports.len()))),
        }
    })
}
