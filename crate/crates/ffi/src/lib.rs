//! C ABI over the quadlie library.
//!
//! Oscillator data lives behind an opaque `QlOscillator` handle created from
//! a JSON document and released with `ql_oscillator_free`. Results come back
//! as JSON strings owned by the caller and released with `ql_string_free`.
//! Every entry point returns a `QlStatus`; the message of the last failure
//! on the calling thread is available through `ql_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quadlie::oscillator::{
    build_double_extension, classify_nilpotent, decide_isometric, local_criteria, verify_structure, OscillatorData,
};
use quadlie::skewcanon::canonical_pair;
use quadlie::{json, Error};
use serde_json::Value;

/// Status codes returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Validation = 3,
    Dimension = 4,
    Precondition = 5,
    Domain = 6,
    Contract = 7,
    Degenerate = 8,
    Singular = 9,
    Capability = 10,
    Internal = 11,
    Panic = 12,
}

/// Opaque oscillator data `(V, phi, delta)`.
pub struct QlOscillator {
    data: OscillatorData,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QlStatus {
    match e {
        Error::Validation(_) => QlStatus::Validation,
        Error::Dimension(_) => QlStatus::Dimension,
        Error::Precondition(_) => QlStatus::Precondition,
        Error::Domain(_) => QlStatus::Domain,
        Error::Contract(_) => QlStatus::Contract,
        Error::Degenerate(_) => QlStatus::Degenerate,
        Error::Singular(_) => QlStatus::Singular,
        Error::Capability(_) => QlStatus::Capability,
        Error::Internal(_) => QlStatus::Internal,
    }
}

fn guard<F: FnOnce() -> Result<(), QlStatus>>(f: F) -> QlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside the library".into());
            QlStatus::Panic
        }
    }
}

fn lift<T>(r: quadlie::Result<T>) -> Result<T, QlStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, QlStatus> {
    if s.is_null() {
        set_error("null string argument".into());
        return Err(QlStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        QlStatus::InvalidUtf8
    })
}

unsafe fn handle<'a>(h: *const QlOscillator) -> Result<&'a QlOscillator, QlStatus> {
    if h.is_null() {
        set_error("null handle".into());
        return Err(QlStatus::NullPointer);
    }
    Ok(&*h)
}

unsafe fn write_json(out: *mut *mut c_char, v: &Value) -> Result<(), QlStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(QlStatus::NullPointer);
    }
    let s = CString::new(json::to_string(v)).map_err(|_| QlStatus::Internal)?;
    *out = s.into_raw();
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ql_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the last error message of this thread into `*out` (NULL when none).
///
/// # Safety
/// `out` must be a valid pointer; the string is released with `ql_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ql_last_error(out: *mut *mut c_char) -> QlStatus {
    if out.is_null() {
        return QlStatus::NullPointer;
    }
    *out = LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()));
    QlStatus::Ok
}

/// Parses `{"field", "gram", "delta"}` into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_oscillator_from_json(text: *const c_char, out: *mut *mut QlOscillator) -> QlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return Err(QlStatus::NullPointer);
        }
        let s = read_str(text)?;
        let v: Value = serde_json::from_str(s).map_err(|e| {
            set_error(format!("input is not valid JSON: {e}"));
            QlStatus::Validation
        })?;
        let data = lift(json::parse_oscillator(None, &v))?;
        *out = Box::into_raw(Box::new(QlOscillator { data }));
        Ok(())
    })
}

/// Releases a handle; NULL is ignored.
///
/// # Safety
/// `h` must come from `ql_oscillator_from_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ql_oscillator_free(h: *mut QlOscillator) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Releases a string returned by this library; NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ql_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `dim V`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_oscillator_dim(h: *const QlOscillator, out: *mut usize) -> QlStatus {
    guard(|| {
        let h = handle(h)?;
        if out.is_null() {
            return Err(QlStatus::NullPointer);
        }
        *out = h.data.dim();
        Ok(())
    })
}

/// Dimension of the space of invariant symmetric forms of the extension.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_quadratic_dimension(h: *const QlOscillator, out: *mut usize) -> QlStatus {
    guard(|| {
        let h = handle(h)?;
        if out.is_null() {
            return Err(QlStatus::NullPointer);
        }
        *out = lift(build_double_extension(&h.data))?.algebra.quadratic_dimension();
        Ok(())
    })
}

/// Structure constants and form of the double extension as JSON.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_construct(h: *const QlOscillator, out: *mut *mut c_char) -> QlStatus {
    guard(|| {
        let h = handle(h)?;
        let q = lift(build_double_extension(&h.data))?;
        write_json(out, &json::document(Some(h.data.field()), "quadratic-lie-algebra", json::quadratic_algebra(&q)))
    })
}

/// Series, locality and structure report as JSON.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_analyze(h: *const QlOscillator, out: *mut *mut c_char) -> QlStatus {
    guard(|| {
        let h = handle(h)?;
        let s = lift(verify_structure(&h.data))?;
        let l = lift(local_criteria(&h.data))?;
        let body = serde_json::json!({ "structure": json::structure_report(&s), "local": json::local_report(&l) });
        write_json(out, &json::document(Some(h.data.field()), "analysis", body))
    })
}

/// Canonical pair certificate of `delta` as JSON.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_canonical_pair(h: *const QlOscillator, out: *mut *mut c_char) -> QlStatus {
    guard(|| {
        let h = handle(h)?;
        let cp = lift(canonical_pair(h.data.skew()))?;
        write_json(out, &json::document(Some(h.data.field()), "canonical-pair", json::canonical_pair(&cp)))
    })
}

/// Block classification of a nilpotent `delta` as JSON.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_classify_nilpotent(h: *const QlOscillator, out: *mut *mut c_char) -> QlStatus {
    guard(|| {
        let h = handle(h)?;
        let c = lift(classify_nilpotent(&h.data))?;
        write_json(out, &json::document(Some(h.data.field()), "nilpotent-class", json::nilpotent_class(&c)))
    })
}

/// Isometric isomorphism decision between two extensions as JSON.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_decide_isometric(
    a: *const QlOscillator,
    b: *const QlOscillator,
    out: *mut *mut c_char,
) -> QlStatus {
    guard(|| {
        let a = handle(a)?;
        let b = handle(b)?;
        let d = lift(decide_isometric(&a.data, &b.data))?;
        write_json(out, &json::document(Some(a.data.field()), "iso-decision", json::iso_decision(&d)))
    })
}
