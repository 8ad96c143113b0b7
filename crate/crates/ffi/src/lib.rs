//! C interface to `pboxposs`.
//!
//! Models live behind opaque handles created from JSON documents. Every
//! function returns a [`PbpStatus`]; on failure [`pbp_last_error`] describes
//! the problem. Strings returned through out-parameters are owned by the
//! caller and released with [`pbp_string_free`]. Rationals are rendered as
//! `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pboxposs::document::{render_distribution, ModelDocument};
use pboxposs::maxitive::is_maxitive;
use pboxposs::multivariate::{self, JointRule};
use pboxposs::possibility::{self, PossibilityCheck};
use pboxposs::{rational, Event, PBox, PossDist};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidDocument = 3,
    InvalidArgument = 4,
    /// The model does not support the operation, e.g. converting a p-box
    /// that is not a possibility measure.
    NotApplicable = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbpJointRule {
    Frechet = 0,
    Independent = 1,
    RandomSetOuter = 2,
}

/// Opaque p-box handle.
pub struct PbpPBox(PBox);

/// Opaque possibility distribution handle.
pub struct PbpPossDist(PossDist);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(PbpStatus, String);

impl Failure {
    fn new(status: PbpStatus, message: impl ToString) -> Self {
        Failure(status, message.to_string())
    }
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> PbpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            PbpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PbpStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(PbpStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure::new(PbpStatus::InvalidUtf8, e))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(PbpStatus::NullPointer, "null handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(PbpStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure::new(PbpStatus::InvalidArgument, e))?;
    write_out(out, c.into_raw())
}

fn parse_document(json: &str) -> Result<ModelDocument, Failure> {
    ModelDocument::from_json(json).map_err(|e| Failure::new(PbpStatus::InvalidDocument, e))
}

fn invalid(e: impl ToString) -> Failure {
    Failure::new(PbpStatus::InvalidArgument, e)
}

fn event_of(labels: &str) -> Event {
    Event::from_labels(labels.split(',').map(str::trim).filter(|l| !l.is_empty()))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pbp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pbp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pbp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a p-box from a document with `classes`, `lower` and `upper`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_pbox_from_json(json: *const c_char, out: *mut *mut PbpPBox) -> PbpStatus {
    guarded(|| {
        let doc = parse_document(text(json)?)?;
        let p = doc.pbox().map_err(|e| Failure::new(PbpStatus::InvalidDocument, e))?;
        write_out(out, Box::into_raw(Box::new(PbpPBox(p))))
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pbp_pbox_free(p: *mut PbpPBox) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// The p-box as a JSON document.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_pbox_to_json(p: *const PbpPBox, out: *mut *mut c_char) -> PbpStatus {
    guarded(|| {
        let p = handle(p)?;
        write_string(out, ModelDocument::from_pbox(&p.0).to_json())
    })
}

/// Upper probability of the event given as comma-separated labels.
///
/// # Safety
/// `p` must be a live handle, `event` a NUL-terminated string and `out` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_pbox_upper(
    p: *const PbpPBox,
    event: *const c_char,
    out: *mut *mut c_char,
) -> PbpStatus {
    guarded(|| {
        let p = handle(p)?;
        let v = p.0.upper_ext(&event_of(text(event)?)).map_err(invalid)?;
        write_string(out, rational::format(&v))
    })
}

/// Lower probability of the event given as comma-separated labels.
///
/// # Safety
/// As for [`pbp_pbox_upper`].
#[no_mangle]
pub unsafe extern "C" fn pbp_pbox_lower(
    p: *const PbpPBox,
    event: *const c_char,
    out: *mut *mut c_char,
) -> PbpStatus {
    guarded(|| {
        let p = handle(p)?;
        let v = p.0.lower_ext(&event_of(text(event)?)).map_err(invalid)?;
        write_string(out, rational::format(&v))
    })
}

/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_pbox_is_maxitive(p: *const PbpPBox, out: *mut bool) -> PbpStatus {
    guarded(|| {
        let p = handle(p)?;
        write_out(out, is_maxitive(&p.0))
    })
}

/// The possibility distribution of a maxitive p-box. Returns
/// `PBP_STATUS_NOT_APPLICABLE` otherwise, with a witness event in the error
/// message.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_pbox_to_possibility(p: *const PbpPBox, out: *mut *mut PbpPossDist) -> PbpStatus {
    guarded(|| {
        let p = handle(p)?;
        match possibility::pbox_to_possibility(&p.0).map_err(invalid)? {
            PossibilityCheck::Possibility(pi) => write_out(out, Box::into_raw(Box::new(PbpPossDist(pi)))),
            PossibilityCheck::NotPossibility { witness } => Err(Failure::new(
                PbpStatus::NotApplicable,
                format!(
                    "not a possibility measure: upper probability of {witness} is not a singleton maximum"
                ),
            )),
        }
    })
}

/// Builds a distribution from a document with `pi`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_possibility_from_json(
    json: *const c_char,
    out: *mut *mut PbpPossDist,
) -> PbpStatus {
    guarded(|| {
        let doc = parse_document(text(json)?)?;
        let pi = doc.possibility().map_err(|e| Failure::new(PbpStatus::InvalidDocument, e))?;
        write_out(out, Box::into_raw(Box::new(PbpPossDist(pi))))
    })
}

/// # Safety
/// `pi` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pbp_possibility_free(pi: *mut PbpPossDist) {
    if !pi.is_null() {
        drop(Box::from_raw(pi));
    }
}

/// The distribution as a JSON document `{"pi": {...}}`.
///
/// # Safety
/// `pi` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_possibility_to_json(pi: *const PbpPossDist, out: *mut *mut c_char) -> PbpStatus {
    guarded(|| {
        let pi = handle(pi)?;
        write_string(out, ModelDocument::from_possibility(&pi.0).to_json())
    })
}

/// Possibility of the event given as comma-separated labels.
///
/// # Safety
/// `pi` must be a live handle, `event` a NUL-terminated string and `out` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_possibility_measure(
    pi: *const PbpPossDist,
    event: *const c_char,
    out: *mut *mut c_char,
) -> PbpStatus {
    guarded(|| {
        let pi = handle(pi)?;
        let v = pi.0.measure(&event_of(text(event)?)).map_err(invalid)?;
        write_string(out, rational::format(&v))
    })
}

/// The p-box induced on the level-set ordering of the distribution.
///
/// # Safety
/// `pi` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_possibility_to_pbox(
    pi: *const PbpPossDist,
    out: *mut *mut PbpPBox,
) -> PbpStatus {
    guarded(|| {
        let pi = handle(pi)?;
        let (_, p) = possibility::possibility_to_pbox(&pi.0).map_err(invalid)?;
        write_out(out, Box::into_raw(Box::new(PbpPBox(p))))
    })
}

/// Joint distribution of the marginals in a document with `marginals`,
/// returned as a JSON document `{"pi": {...}}` with points labelled
/// `x1|x2|…`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_joint(
    json: *const c_char,
    rule: PbpJointRule,
    out: *mut *mut c_char,
) -> PbpStatus {
    guarded(|| {
        let doc = parse_document(text(json)?)?;
        let family = doc.family().map_err(|e| Failure::new(PbpStatus::InvalidDocument, e))?;
        let rule = match rule {
            PbpJointRule::Frechet => JointRule::Frechet,
            PbpJointRule::Independent => JointRule::Independent,
            PbpJointRule::RandomSetOuter => JointRule::RandomSetOuter,
        };
        let joint = multivariate::joint(&family, rule);
        let doc = ModelDocument { pi: Some(render_distribution(&joint)), ..Default::default() };
        write_string(out, doc.to_json())
    })
}
