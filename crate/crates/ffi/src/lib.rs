//! C ABI over the convex effect algebra toolkit.
//!
//! Documents are held behind an opaque handle; every function returns a
//! status code and writes results through out-pointers. Strings returned
//! through out-pointers are heap-allocated and must be released with
//! [`cea_string_free`]. Verdict-style booleans mirror the CLI semantics:
//! `true` corresponds to exit code 0, `false` to exit code 1.
//!
//! The matching header is generated into `include/cea.h` at build time.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cea_core::algebra::is_effect;
use cea_core::doc::{DocError, Document};
use cea_core::infocomplete;
use cea_core::quantum::{self, StrongifyOutcome};
use cea_core::report::{payload_json, rationals_json};
use serde_json::json;

/// Status code returned by every API function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeaStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    Utf8Error = 2,
    /// The document could not be parsed.
    ParseError = 3,
    /// No entity with the given name exists in the document.
    NotFound = 4,
    /// The inputs violate a precondition of the operation.
    InvalidInput = 5,
    /// The computation failed internally.
    ComputeError = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl std::fmt::Display) {
    let text = CString::new(message.to_string().replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn doc_error_status(err: &DocError) -> CeaStatus {
    match err {
        DocError::NotFound { .. } => CeaStatus::NotFound,
        DocError::Io { .. } | DocError::Json(_) => CeaStatus::ParseError,
        DocError::Invalid { .. } => CeaStatus::InvalidInput,
    }
}

/// Opaque document handle.
pub struct CeaDocument {
    inner: Document,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cea_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn cea_status_name(status: CeaStatus) -> *const c_char {
    let name: &'static str = match status {
        CeaStatus::Ok => "ok\0",
        CeaStatus::NullPointer => "null pointer\0",
        CeaStatus::Utf8Error => "invalid utf-8\0",
        CeaStatus::ParseError => "parse error\0",
        CeaStatus::NotFound => "not found\0",
        CeaStatus::InvalidInput => "invalid input\0",
        CeaStatus::ComputeError => "compute error\0",
    };
    name.as_ptr() as *const c_char
}

/// Detailed message for the most recent failure on this thread, or null.
/// The caller owns the returned string and frees it with
/// [`cea_string_free`].
#[no_mangle]
pub extern "C" fn cea_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(text) => text.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer previously returned by one of the
/// string-producing functions of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cea_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, CeaStatus> {
    if ptr.is_null() {
        return Err(CeaStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|e| {
        set_error(e);
        CeaStatus::Utf8Error
    })
}

unsafe fn read_names(
    names: *const *const c_char,
    len: usize,
) -> Result<Vec<String>, CeaStatus> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if names.is_null() {
        return Err(CeaStatus::NullPointer);
    }
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        out.push(read_str(*names.add(i))?.to_string());
    }
    Ok(out)
}

fn guarded(body: impl FnOnce() -> CeaStatus) -> CeaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            CeaStatus::ComputeError
        }
    }
}

fn write_string(out: *mut *mut c_char, text: String) -> CeaStatus {
    if out.is_null() {
        return CeaStatus::Ok; // caller opted out of the payload
    }
    match CString::new(text.replace('\0', " ")) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            CeaStatus::Ok
        }
        Err(e) => {
            set_error(e);
            CeaStatus::ComputeError
        }
    }
}

/// Parses a JSON document from a string.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer. On
/// success `*out` owns the document and must be released with
/// [`cea_document_free`].
#[no_mangle]
pub unsafe extern "C" fn cea_document_parse(
    json: *const c_char,
    tol: f64,
    out: *mut *mut CeaDocument,
) -> CeaStatus {
    guarded(|| {
        clear_error();
        if out.is_null() {
            return CeaStatus::NullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Document::parse_str(text, tol) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(CeaDocument { inner: doc }));
                CeaStatus::Ok
            }
            Err(e) => {
                let status = doc_error_status(&e);
                set_error(e);
                status
            }
        }
    })
}

/// Loads a JSON document from a file path.
///
/// # Safety
/// As for [`cea_document_parse`].
#[no_mangle]
pub unsafe extern "C" fn cea_document_load(
    path: *const c_char,
    tol: f64,
    out: *mut *mut CeaDocument,
) -> CeaStatus {
    guarded(|| {
        clear_error();
        if out.is_null() {
            return CeaStatus::NullPointer;
        }
        let path = match read_str(path) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Document::load(std::path::Path::new(path), tol) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(CeaDocument { inner: doc }));
                CeaStatus::Ok
            }
            Err(e) => {
                let status = doc_error_status(&e);
                set_error(e);
                status
            }
        }
    })
}

/// Releases a document handle.
///
/// # Safety
/// `doc` must be null or a pointer returned by a document constructor, not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn cea_document_free(doc: *mut CeaDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

unsafe fn borrow_doc<'a>(doc: *const CeaDocument) -> Result<&'a Document, CeaStatus> {
    if doc.is_null() {
        return Err(CeaStatus::NullPointer);
    }
    Ok(&(*doc).inner)
}

/// Does the named payload satisfy `0 <= a <= u`?
///
/// # Safety
/// `doc` must be a live document handle, `name` a NUL-terminated string,
/// `verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cea_check_effect(
    doc: *const CeaDocument,
    name: *const c_char,
    tol: f64,
    verdict: *mut bool,
) -> CeaStatus {
    guarded(|| {
        clear_error();
        let document = match borrow_doc(doc) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if verdict.is_null() {
            return CeaStatus::NullPointer;
        }
        let payload = match document.effect_payload(name) {
            Ok(p) => p,
            Err(e) => {
                let status = doc_error_status(&e);
                set_error(e);
                return status;
            }
        };
        match is_effect(&document.base(), payload, tol) {
            Ok(v) => {
                *verdict = v;
                CeaStatus::Ok
            }
            Err(e) => {
                set_error(e);
                CeaStatus::InvalidInput
            }
        }
    })
}

unsafe fn check_predicate(
    doc: *const CeaDocument,
    name: *const c_char,
    tol: f64,
    verdict: *mut bool,
    predicate: impl Fn(&cea_core::algebra::Effect) -> bool,
) -> CeaStatus {
    guarded(|| {
        clear_error();
        let document = match borrow_doc(doc) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if verdict.is_null() {
            return CeaStatus::NullPointer;
        }
        match document.effect(name, tol) {
            Ok(e) => {
                *verdict = predicate(&e);
                CeaStatus::Ok
            }
            Err(e) => {
                let status = doc_error_status(&e);
                set_error(e);
                status
            }
        }
    })
}

/// Is the named effect sharp?
///
/// # Safety
/// As for [`cea_check_effect`].
#[no_mangle]
pub unsafe extern "C" fn cea_check_sharp(
    doc: *const CeaDocument,
    name: *const c_char,
    tol: f64,
    verdict: *mut bool,
) -> CeaStatus {
    check_predicate(doc, name, tol, verdict, |e| e.is_sharp(tol))
}

/// Is the named effect strong?
///
/// # Safety
/// As for [`cea_check_effect`].
#[no_mangle]
pub unsafe extern "C" fn cea_check_strong(
    doc: *const CeaDocument,
    name: *const c_char,
    tol: f64,
    verdict: *mut bool,
) -> CeaStatus {
    check_predicate(doc, name, tol, verdict, |e| e.is_strong(tol))
}

/// Do the named outcome effects form an observable (sum to the unit)?
///
/// # Safety
/// As for [`cea_check_effect`].
#[no_mangle]
pub unsafe extern "C" fn cea_observable_validate(
    doc: *const CeaDocument,
    name: *const c_char,
    tol: f64,
    verdict: *mut bool,
) -> CeaStatus {
    guarded(|| {
        clear_error();
        let document = match borrow_doc(doc) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if verdict.is_null() {
            return CeaStatus::NullPointer;
        }
        match document.observable(name, tol) {
            Ok(_) => {
                *verdict = true;
                CeaStatus::Ok
            }
            Err(DocError::NotFound { kind, name }) => {
                set_error(format!("no {kind} named {name:?}"));
                CeaStatus::NotFound
            }
            Err(e) => {
                set_error(e);
                *verdict = false;
                CeaStatus::Ok
            }
        }
    })
}

/// Decides informational completeness of the named random variables (all
/// of them when `names_len` is zero). When the family is not IC and
/// `witness_json` is non-null, a JSON object `{"mu": [...], "nu": [...]}`
/// with exact rational entries is returned through it.
///
/// # Safety
/// `doc` must be a live handle, `names` an array of `names_len`
/// NUL-terminated strings (or null when `names_len` is 0), `verdict` a
/// valid pointer, `witness_json` null or valid.
#[no_mangle]
pub unsafe extern "C" fn cea_ic_decide(
    doc: *const CeaDocument,
    names: *const *const c_char,
    names_len: usize,
    verdict: *mut bool,
    witness_json: *mut *mut c_char,
) -> CeaStatus {
    guarded(|| {
        clear_error();
        let document = match borrow_doc(doc) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let names = match read_names(names, names_len) {
            Ok(n) => n,
            Err(s) => return s,
        };
        if verdict.is_null() {
            return CeaStatus::NullPointer;
        }
        if !witness_json.is_null() {
            *witness_json = ptr::null_mut();
        }
        let fs = match document.random_variables_in_order(&names) {
            Ok(fs) => fs,
            Err(e) => {
                let status = doc_error_status(&e);
                set_error(e);
                return status;
            }
        };
        match infocomplete::is_ic(&fs) {
            Ok(result) => {
                *verdict = result.ic;
                if let Some(w) = result.witness {
                    let payload = json!({
                        "mu": rationals_json(&w.mu),
                        "nu": rationals_json(&w.nu),
                    });
                    return write_string(witness_json, payload.to_string());
                }
                CeaStatus::Ok
            }
            Err(e) => {
                set_error(e);
                CeaStatus::InvalidInput
            }
        }
    })
}

/// Runs the strong decomposition of the named quantum effects (all of them
/// when `names_len` is zero) and returns a JSON report with residuals and
/// remainder spectra.
///
/// # Safety
/// As for [`cea_ic_decide`]; `report_json` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn cea_strong_decomposition(
    doc: *const CeaDocument,
    names: *const *const c_char,
    names_len: usize,
    tol: f64,
    report_json: *mut *mut c_char,
) -> CeaStatus {
    guarded(|| {
        clear_error();
        let document = match borrow_doc(doc) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let names = match read_names(names, names_len) {
            Ok(n) => n,
            Err(s) => return s,
        };
        let effects = match document.effects_in_order(&names, tol) {
            Ok(es) => es,
            Err(e) => {
                let status = doc_error_status(&e);
                set_error(e);
                return status;
            }
        };
        match quantum::strong_decomposition(&effects, tol) {
            Ok(d) => {
                let payload = json!({
                    "projection_traces": d.projections().iter().map(|p| p.trace()).collect::<Vec<_>>(),
                    "q_trace": d.q().trace(),
                    "remainder_spectra": d.remainder_spectra(),
                    "residuals": {
                        "reconstruction": d.reconstruction_residual(),
                        "partition": d.partition_residual(),
                        "orthogonality": d.orthogonality_residual(),
                        "cross": d.cross_residual(),
                    },
                });
                write_string(report_json, payload.to_string())
            }
            Err(e) => {
                set_error(e);
                CeaStatus::InvalidInput
            }
        }
    })
}

/// Rewrites the named commuting quantum effects as strong generators.
/// `verdict` is true when strong generators were produced (their payloads
/// are returned as JSON through `report_json`) and false when a proof-gap
/// report was produced instead (also returned as JSON).
///
/// # Safety
/// As for [`cea_ic_decide`]; `report_json` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn cea_strongify(
    doc: *const CeaDocument,
    names: *const *const c_char,
    names_len: usize,
    tol: f64,
    seed: u64,
    verdict: *mut bool,
    report_json: *mut *mut c_char,
) -> CeaStatus {
    guarded(|| {
        clear_error();
        let document = match borrow_doc(doc) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let names = match read_names(names, names_len) {
            Ok(n) => n,
            Err(s) => return s,
        };
        if verdict.is_null() {
            return CeaStatus::NullPointer;
        }
        let effects = match document.effects_in_order(&names, tol) {
            Ok(es) => es,
            Err(e) => {
                let status = doc_error_status(&e);
                set_error(e);
                return status;
            }
        };
        match quantum::strongify_commutative(&effects, tol, seed) {
            Ok(StrongifyOutcome::Strong(out)) => {
                *verdict = true;
                let payload = json!({
                    "generators": out
                        .iter()
                        .map(|e| payload_json(e.payload()))
                        .collect::<Vec<_>>(),
                });
                write_string(report_json, payload.to_string())
            }
            Ok(StrongifyOutcome::ProofGap(report)) => {
                *verdict = false;
                let payload = json!({
                    "kind": "proof_gap_instance",
                    "detail": report.detail,
                    "selections_tried": report.selections_tried,
                    "diagonals": report.diagonals,
                });
                write_string(report_json, payload.to_string())
            }
            Err(e) => {
                set_error(e);
                CeaStatus::InvalidInput
            }
        }
    })
}
