//! C ABI over `mpres`.
//!
//! Conventions:
//! * every fallible function returns an [`MpresStatus`] and writes results
//!   through out-pointers only on success;
//! * integers cross the boundary as decimal strings when they may be large
//!   (primes, Eisenstein integers) and as fixed-width integers otherwise;
//! * handles are opaque and owned by the caller once returned; release them
//!   with the matching `_free` function;
//! * strings returned by the library are released with [`mpres_string_free`];
//! * the message of the most recent failure on the calling thread is
//!   available from [`mpres_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use mpres::arith::{legendre_symbol, DEFAULT_TERNARY_BOUND};
use mpres::cubic::{build_theta_certificate, check_triple, symbol_from_certificate, ThetaCertificate, DEFAULT_ALPHA_BOUND};
use mpres::eisenstein::{normalize_prime, EisPrime, PrimeInput};
use mpres::magnus::{magnus_coefficient, GroupWord};
use mpres::milnor::{milnor_invariant, tuple_symbol, LinkPresentation};
use num_bigint::BigInt;
use mpres::redei::redei_symbol;
use mpres::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MpresStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument is not UTF-8 or does not parse.
    InvalidArgument = 2,
    /// The inputs violate an admissibility condition.
    NotAdmissible = 3,
    /// A search ran out of its bound.
    BoundExceeded = 4,
    /// A computation hit a degenerate case.
    Degenerate = 5,
    /// Any other domain error.
    DomainError = 6,
    /// An internal panic was caught at the boundary.
    Panic = 7,
}

/// A verified certificate for a pair of primes of `Z[w]`.
pub struct MpresCertificate {
    cert: ThetaCertificate,
}

/// A validated presentation of link type.
pub struct MpresPresentation {
    pres: LinkPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> MpresStatus {
    match err.kind() {
        "NotAdmissible" | "NotNineAdmissible" | "DistinctnessViolated" | "IndexNotInS" | "LengthOutOfRange" | "AssumptionViolated"
        | "HypothesisViolated" | "Ramified" | "NotCoprimeToThree" | "DividesArgument" => MpresStatus::NotAdmissible,
        "BoundExceeded" => MpresStatus::BoundExceeded,
        "Degenerate" | "ThetaVanishes" | "NoWitness" => MpresStatus::Degenerate,
        "Parse" | "InvalidPresentation" | "InvalidModulus" | "NotPrime" | "EmptyIndex" | "IndexOutOfRange" => MpresStatus::InvalidArgument,
        _ => MpresStatus::DomainError,
    }
}

enum Fail {
    Status(MpresStatus, String),
}

impl<E: Into<Error>> From<E> for Fail {
    fn from(e: E) -> Self {
        let e: Error = e.into();
        Fail::Status(status_of(&e), e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail::Status(MpresStatus::InvalidArgument, msg.into())
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MpresStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MpresStatus::Ok
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            MpresStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Status(MpresStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{name} is not UTF-8")))
}

fn parse_int(s: &str, name: &str) -> Result<BigInt, Fail> {
    BigInt::from_str(s.trim()).map_err(|_| invalid(format!("{name} = {s:?} is not an integer")))
}

fn parse_prime(s: &str) -> Result<EisPrime, Fail> {
    let input = PrimeInput::from_str(s).map_err(Fail::from)?;
    Ok(normalize_prime(&input)?)
}

fn check_out<T>(p: *mut T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail::Status(MpresStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `index` is null only when `len == 0`, else points to `len` values.
unsafe fn read_index<'a>(index: *const usize, len: usize) -> Result<&'a [usize], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if index.is_null() {
        return Err(Fail::Status(MpresStatus::NullPointer, "index is null".into()));
    }
    Ok(std::slice::from_raw_parts(index, len))
}

fn bound_or_default(bound: u64, default: u64) -> u64 {
    if bound == 0 {
        default
    } else {
        bound
    }
}

/// Version string of the library; static, never freed.
#[no_mangle]
pub extern "C" fn mpres_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or null. Free with
/// [`mpres_string_free`].
#[no_mangle]
pub extern "C" fn mpres_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mpres_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Legendre symbol `(a/p)` in `{-1, 0, 1}`.
///
/// # Safety
/// `a`, `p` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mpres_legendre(a: *const c_char, p: *const c_char, out: *mut i8) -> MpresStatus {
    guard(|| {
        check_out(out, "out")?;
        let a = parse_int(read_str(a, "a")?, "a")?;
        let p = parse_int(read_str(p, "p")?, "p")?;
        *out = legendre_symbol(&a, &p)?;
        Ok(())
    })
}

/// Quadratic triple symbol exponent (0 or 1). `bound = 0` selects the default.
///
/// # Safety
/// String arguments are NUL-terminated; `exponent` is writable.
#[no_mangle]
pub unsafe extern "C" fn mpres_redei_symbol(
    p1: *const c_char,
    p2: *const c_char,
    p3: *const c_char,
    bound: u64,
    exponent: *mut u64,
) -> MpresStatus {
    guard(|| {
        check_out(exponent, "exponent")?;
        let p1 = parse_int(read_str(p1, "p1")?, "p1")?;
        let p2 = parse_int(read_str(p2, "p2")?, "p2")?;
        let p3 = parse_int(read_str(p3, "p3")?, "p3")?;
        *exponent = redei_symbol(&p1, &p2, &p3, bound_or_default(bound, DEFAULT_TERNARY_BOUND))?.exponent;
        Ok(())
    })
}

/// Triple cubic residue symbol exponent in `{0, 1, 2}`. Primes are given as
/// rational primes (`"17"`) or generators (`"-5-3*w"`). `bound = 0` selects
/// the default.
///
/// # Safety
/// String arguments are NUL-terminated; `exponent` is writable.
#[no_mangle]
pub unsafe extern "C" fn mpres_cubic_symbol(
    p1: *const c_char,
    p2: *const c_char,
    p3: *const c_char,
    bound: u64,
    exponent: *mut u64,
) -> MpresStatus {
    guard(|| {
        check_out(exponent, "exponent")?;
        let (a, b, c) = (parse_prime(read_str(p1, "p1")?)?, parse_prime(read_str(p2, "p2")?)?, parse_prime(read_str(p3, "p3")?)?);
        check_triple(&a, &b, &c)?;
        let cert = build_theta_certificate(&a, &b, bound_or_default(bound, DEFAULT_ALPHA_BOUND))?;
        *exponent = symbol_from_certificate(&cert, &c)?.exponent;
        Ok(())
    })
}

/// Builds a certificate for `(p1, p2)`. `bound = 0` selects the default.
///
/// # Safety
/// String arguments are NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mpres_certificate_new(
    p1: *const c_char,
    p2: *const c_char,
    bound: u64,
    out: *mut *mut MpresCertificate,
) -> MpresStatus {
    guard(|| {
        check_out(out, "out")?;
        let a = parse_prime(read_str(p1, "p1")?)?;
        let b = parse_prime(read_str(p2, "p2")?)?;
        let cert = build_theta_certificate(&a, &b, bound_or_default(bound, DEFAULT_ALPHA_BOUND))?;
        *out = Box::into_raw(Box::new(MpresCertificate { cert }));
        Ok(())
    })
}

/// Symbol exponent of the certificate's pair at `p3`.
///
/// # Safety
/// `cert` is a live handle; `p3` is NUL-terminated; `exponent` is writable.
#[no_mangle]
pub unsafe extern "C" fn mpres_certificate_symbol(cert: *const MpresCertificate, p3: *const c_char, exponent: *mut u64) -> MpresStatus {
    guard(|| {
        check_out(exponent, "exponent")?;
        let cert = cert.as_ref().ok_or_else(|| Fail::Status(MpresStatus::NullPointer, "cert is null".into()))?;
        let c = parse_prime(read_str(p3, "p3")?)?;
        let a = EisPrime::from_generator(&cert.cert.pi1)?;
        let b = EisPrime::from_generator(&cert.cert.pi2)?;
        check_triple(&a, &b, &c)?;
        *exponent = symbol_from_certificate(&cert.cert, &c)?.exponent;
        Ok(())
    })
}

/// JSON form of the certificate. Free the result with [`mpres_string_free`].
///
/// # Safety
/// `cert` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mpres_certificate_json(cert: *const MpresCertificate, out: *mut *mut c_char) -> MpresStatus {
    guard(|| {
        check_out(out, "out")?;
        let cert = cert.as_ref().ok_or_else(|| Fail::Status(MpresStatus::NullPointer, "cert is null".into()))?;
        let text = serde_json::to_string(&cert.cert).map_err(|e| invalid(e.to_string()))?;
        *out = CString::new(text).map_err(|e| invalid(e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `cert` is null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mpres_certificate_free(cert: *mut MpresCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Parses a presentation from JSON (`l`, `m`, `norms`, `y`, `S`).
///
/// # Safety
/// `json` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mpres_presentation_from_json(json: *const c_char, out: *mut *mut MpresPresentation) -> MpresStatus {
    guard(|| {
        check_out(out, "out")?;
        let pres = LinkPresentation::from_json(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(MpresPresentation { pres }));
        Ok(())
    })
}

/// # Safety
/// `pres` is null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mpres_presentation_free(pres: *mut MpresPresentation) {
    if !pres.is_null() {
        drop(Box::from_raw(pres));
    }
}

/// Milnor invariant of the 1-based multi-index: raw value, indeterminacy
/// generator (`0` for the zero ideal) and the reduced class.
///
/// # Safety
/// `pres` is a live handle; `index` points to `len` values; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn mpres_milnor_invariant(
    pres: *const MpresPresentation,
    index: *const usize,
    len: usize,
    value: *mut u64,
    delta: *mut u64,
    reduced: *mut u64,
) -> MpresStatus {
    guard(|| {
        check_out(value, "value")?;
        check_out(delta, "delta")?;
        check_out(reduced, "reduced")?;
        let pres = pres.as_ref().ok_or_else(|| Fail::Status(MpresStatus::NullPointer, "pres is null".into()))?;
        let r = milnor_invariant(&pres.pres, read_index(index, len)?)?;
        *value = r.value;
        *delta = r.delta;
        *reduced = r.reduced;
        Ok(())
    })
}

/// Exponent of the power residue symbol attached to the multi-index.
///
/// # Safety
/// `pres` is a live handle; `index` points to `len` values; `exponent` is writable.
#[no_mangle]
pub unsafe extern "C" fn mpres_tuple_symbol(pres: *const MpresPresentation, index: *const usize, len: usize, exponent: *mut u64) -> MpresStatus {
    guard(|| {
        check_out(exponent, "exponent")?;
        let pres = pres.as_ref().ok_or_else(|| Fail::Status(MpresStatus::NullPointer, "pres is null".into()))?;
        *exponent = tuple_symbol(&pres.pres, read_index(index, len)?)?.symbol.exponent;
        Ok(())
    })
}

/// Magnus coefficient of `word` (e.g. `"[x1,x2] x3^-1"`) at the 1-based
/// multi-index, modulo the prime power `m`.
///
/// # Safety
/// `word` is NUL-terminated; `index` points to `len` values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mpres_magnus_coefficient(word: *const c_char, index: *const usize, len: usize, m: u64, out: *mut u64) -> MpresStatus {
    guard(|| {
        check_out(out, "out")?;
        let w = GroupWord::from_str(read_str(word, "word")?)?;
        let index = read_index(index, len)?;
        let n = index.iter().copied().max().unwrap_or(0).max(w.n_gens());
        *out = magnus_coefficient(&w.with_n_gens(n)?, index, m)?;
        Ok(())
    })
}
