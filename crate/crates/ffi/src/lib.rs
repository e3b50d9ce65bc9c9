//! C ABI for the `uqsl-shapovalov` engine.
//!
//! Conventions:
//!
//! * Every fallible function returns a [`UqslStatus`]; results are written
//!   through out-pointers only on success.
//! * On failure a message is stored per thread and can be read with
//!   [`uqsl_last_error_message`].
//! * Rationals cross the boundary as NUL-terminated `num/den` strings. Strings
//!   returned by the library must be released with [`uqsl_string_free`].
//! * Engines are opaque handles created by [`uqsl_engine_new`] and released by
//!   [`uqsl_engine_free`]. A handle may be used from one thread at a time.
//! * Panics never cross the boundary; they are reported as [`UqslStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use uqsl_shapovalov::formulas::{b_total, genericity_witness, singular_criterion};
use uqsl_shapovalov::qscalars::{fmt_rational, parse_rational, parse_rational_list};
use uqsl_shapovalov::suites::{run_suite, Suite, SuiteConfig};
use uqsl_shapovalov::{Error, Params, TriangularArray, Verma};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UqslStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IndexOutOfRange = 3,
    DegenerateWeight = 4,
    FormulaDiscrepancy = 5,
    Internal = 6,
    Panic = 7,
}

/// Opaque engine handle: a specialization of the highest weight together with
/// the caches of its Verma module.
pub struct UqslEngine {
    verma: Verma,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).unwrap_or_default());
}

fn status_of(err: &Error) -> UqslStatus {
    match err {
        Error::IndexOutOfRange { .. } | Error::BadRootRange { .. } => UqslStatus::IndexOutOfRange,
        Error::InvalidParams(_) | Error::Parse(_) | Error::ZeroPower | Error::MalformedPermutation(_) => {
            UqslStatus::InvalidArgument
        }
        Error::ContentMismatch { .. } => UqslStatus::InvalidArgument,
        Error::DegenerateWeight { .. } => UqslStatus::DegenerateWeight,
        Error::Formula(_) => UqslStatus::FormulaDiscrepancy,
        Error::InternalInvariantViolation(_) => UqslStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (UqslStatus, String)>) -> UqslStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UqslStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            UqslStatus::Panic
        }
    }
}

fn engine_err(err: Error) -> (UqslStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (UqslStatus, String) {
    (UqslStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (UqslStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (UqslStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// # Safety
/// `e` must be null or a handle from [`uqsl_engine_new`].
unsafe fn engine<'a>(e: *const UqslEngine) -> Result<&'a UqslEngine, (UqslStatus, String)> {
    e.as_ref().ok_or_else(|| null("engine"))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// The message of the last failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn uqsl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates an engine for rank `n`, deformation parameter `q` (`"num/den"`) and
/// highest weight `z` (comma-separated `"num/den"` values, `z_i = q^{λ_i}`).
///
/// # Safety
/// `q` and `z` must be valid NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uqsl_engine_new(
    n: usize,
    q: *const c_char,
    z: *const c_char,
    out: *mut *mut UqslEngine,
) -> UqslStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let q = parse_rational(read_str(q, "q")?).map_err(engine_err)?;
        let z = parse_rational_list(read_str(z, "z")?).map_err(engine_err)?;
        let params = Params::new(n, q, z).map_err(engine_err)?;
        *out = Box::into_raw(Box::new(UqslEngine { verma: Verma::new(params) }));
        Ok(())
    })
}

/// Creates an engine at the default profile: `q = 2`, `z = (3, 5, 7, …)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uqsl_engine_new_default(n: usize, out: *mut *mut UqslEngine) -> UqslStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = Params::default_profile(n).map_err(engine_err)?;
        *out = Box::into_raw(Box::new(UqslEngine { verma: Verma::new(params) }));
        Ok(())
    })
}

/// Releases an engine. Passing null is allowed.
///
/// # Safety
/// `e` must be null or a handle from [`uqsl_engine_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uqsl_engine_free(e: *mut UqslEngine) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Releases a string returned by this library. Passing null is allowed.
///
/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uqsl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The rank `n` of the engine, or 0 for a null handle.
///
/// # Safety
/// `e` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn uqsl_engine_rank(e: *const UqslEngine) -> usize {
    e.as_ref().map_or(0, |e| e.verma.rank())
}

/// The predicted norm `B_l` of the dynamical basis vector with exponents
/// `entries` (row by row: `l_11..l_1n, l_22..l_2n, …, l_nn`), as `"num/den"`.
///
/// # Safety
/// `entries` must point to `len` values; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uqsl_b_total(
    e: *const UqslEngine,
    entries: *const u32,
    len: usize,
    out: *mut *mut c_char,
) -> UqslStatus {
    guard(|| {
        let e = engine(e)?;
        if entries.is_null() || out.is_null() {
            return Err(null("entries or out"));
        }
        let values = std::slice::from_raw_parts(entries, len).to_vec();
        let l = TriangularArray::from_entries(e.verma.rank(), values).map_err(engine_err)?;
        let b = b_total(e.verma.params(), &l).map_err(engine_err)?;
        *out = to_c_string(fmt_rational(&b));
        Ok(())
    })
}

/// Whether every `B_l` of content degree at most `depth` is nonzero. When not,
/// and `witness` is non-null, the first degenerate array is written there.
///
/// # Safety
/// `generic` must be valid; `witness` may be null.
#[no_mangle]
pub unsafe extern "C" fn uqsl_genericity(
    e: *const UqslEngine,
    depth: u32,
    generic: *mut bool,
    witness: *mut *mut c_char,
) -> UqslStatus {
    guard(|| {
        let e = engine(e)?;
        if generic.is_null() {
            return Err(null("generic"));
        }
        let w = genericity_witness(e.verma.params(), depth).map_err(engine_err)?;
        *generic = w.is_none();
        if !witness.is_null() {
            *witness = w.map_or(ptr::null_mut(), |l| to_c_string(l.to_string()));
        }
        Ok(())
    })
}

/// Whether the scalar criterion for `f̂_{kn}^m v` to be singular holds.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uqsl_singular_criterion(e: *const UqslEngine, k: usize, m: u32, out: *mut bool) -> UqslStatus {
    guard(|| {
        let e = engine(e)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = singular_criterion(e.verma.params(), k, m).map_err(engine_err)?;
        Ok(())
    })
}

/// Runs a verification suite by name at the engine's weight. `passed`
/// receives the verdict; `checks`, if non-null, the number of checks made.
///
/// # Safety
/// `name` must be a valid string; `passed` a valid pointer; `checks` may be null.
#[no_mangle]
pub unsafe extern "C" fn uqsl_run_suite(
    e: *const UqslEngine,
    name: *const c_char,
    depth: u32,
    power: u32,
    passed: *mut bool,
    checks: *mut u64,
) -> UqslStatus {
    guard(|| {
        let e = engine(e)?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let suite: Suite = read_str(name, "name")?.parse().map_err(engine_err)?;
        let outcome = run_suite(suite, e.verma.params(), &SuiteConfig { depth, power });
        *passed = outcome.passed;
        if !checks.is_null() {
            *checks = outcome.checks;
        }
        if !outcome.passed {
            set_error(outcome.counterexample.as_deref().unwrap_or("formula discrepancy"));
        }
        Ok(())
    })
}

/// Contravariant pairing of the standard basis vectors with exponents `a` and
/// `b` (each `len` entries, row by row), as `"num/den"`.
///
/// # Safety
/// `a` and `b` must point to `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn uqsl_contravariant_pairing(
    e: *const UqslEngine,
    a: *const u32,
    b: *const u32,
    len: usize,
    out: *mut *mut c_char,
) -> UqslStatus {
    guard(|| {
        let e = engine(e)?;
        if a.is_null() || b.is_null() || out.is_null() {
            return Err(null("a, b or out"));
        }
        let n = e.verma.rank();
        let la = TriangularArray::from_entries(n, std::slice::from_raw_parts(a, len).to_vec()).map_err(engine_err)?;
        let lb = TriangularArray::from_entries(n, std::slice::from_raw_parts(b, len).to_vec()).map_err(engine_err)?;
        let x = uqsl_shapovalov::VermaVector::basis(la);
        let y = uqsl_shapovalov::VermaVector::basis(lb);
        let value = e.verma.pair_contravariant(&x, &y).map_err(engine_err)?;
        *out = to_c_string(fmt_rational(&value));
        Ok(())
    })
}
