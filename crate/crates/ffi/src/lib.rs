//! C interface to the LF kernel.
//!
//! A session is created from signature text and owned by the caller through
//! an opaque pointer. Every function returns an [`LfStatus`]; on failure the
//! message is available from [`lf_last_error_message`] on the same thread.
//! Strings returned through `out` parameters are owned by the caller and
//! must be released with [`lf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lf_kernel::frontend::driver::{DriverError, Session};

/// Result codes. The first four match the exit codes of the `lf` binary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfStatus {
    Ok = 0,
    /// The judgment does not hold: ill-typed, not equal, or rejected.
    Fail = 1,
    /// Lexing, parsing or scoping failed.
    ParseError = 2,
    OutOfFuel = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A checked signature with an ambient context.
pub struct LfSession {
    inner: Session,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', "\\0")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Failure {
    Status(LfStatus, String),
    Driver(DriverError),
}

impl From<DriverError> for Failure {
    fn from(e: DriverError) -> Self {
        Failure::Driver(e)
    }
}

fn status_of(e: &DriverError) -> LfStatus {
    match e.exit_code() {
        2 => LfStatus::ParseError,
        3 => LfStatus::OutOfFuel,
        _ => LfStatus::Fail,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LfStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Driver(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("internal error: {msg}"));
            LfStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(
            LfStatus::NullArgument,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::Status(LfStatus::InvalidUtf8, format!("{what} is not UTF-8: {e}")))
}

unsafe fn live<'a>(s: *const LfSession) -> Result<&'a Session, Failure> {
    s.as_ref()
        .map(|s| &s.inner)
        .ok_or_else(|| Failure::Status(LfStatus::NullArgument, "session is null".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Status(
            LfStatus::NullArgument,
            "output pointer is null".into(),
        ));
    }
    let s = s.trim_end_matches('\n');
    let c = CString::new(s)
        .map_err(|_| Failure::Status(LfStatus::Fail, "result contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Parses and checks a signature. `fuel` bounds the reduction steps of each
/// later query; 0 selects the default. On success `*out` owns a new session.
///
/// # Safety
/// `signature` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_session_new(
    signature: *const c_char,
    fuel: u64,
    out: *mut *mut LfSession,
) -> LfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Status(
                LfStatus::NullArgument,
                "output pointer is null".into(),
            ));
        }
        *out = ptr::null_mut();
        let text = text(signature, "signature")?;
        let steps = if fuel == 0 {
            lf_kernel::reduction::Fuel::DEFAULT_STEPS
        } else {
            fuel
        };
        let inner = Session::load(text, steps)?;
        *out = Box::into_raw(Box::new(LfSession { inner }));
        Ok(())
    })
}

/// # Safety
/// `session` must come from [`lf_session_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lf_session_free(session: *mut LfSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Number of declarations in the signature, or 0 for a null session.
///
/// # Safety
/// `session` must be null or a live session.
#[no_mangle]
pub unsafe extern "C" fn lf_session_len(session: *const LfSession) -> usize {
    session.as_ref().map_or(0, |s| s.inner.signature().len())
}

/// Replaces the ambient context with `x:A, y:B, ...`.
///
/// # Safety
/// `session` must be a live session and `context` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lf_session_set_context(
    session: *mut LfSession,
    context: *const c_char,
) -> LfStatus {
    guard(|| {
        let s = session
            .as_mut()
            .ok_or_else(|| Failure::Status(LfStatus::NullArgument, "session is null".into()))?;
        s.inner.set_context(text(context, "context")?)?;
        Ok(())
    })
}

/// Checks that `object` has type `family`.
///
/// # Safety
/// `session` must be a live session; the strings must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn lf_check_object(
    session: *const LfSession,
    object: *const c_char,
    family: *const c_char,
) -> LfStatus {
    guard(|| {
        let s = live(session)?;
        s.check_object(text(object, "object")?, text(family, "type")?)?;
        Ok(())
    })
}

/// Synthesizes the classifier of an object, family or kind and stores its
/// printed form in `*out`.
///
/// # Safety
/// `session` must be a live session, `term` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lf_synth(
    session: *const LfSession,
    term: *const c_char,
    out: *mut *mut c_char,
) -> LfStatus {
    guard(|| {
        let s = live(session)?;
        let r = s.synth(text(term, "term")?)?;
        write_string(out, r)
    })
}

/// Decides whether `left` and `right` are definitionally equal at `family`.
/// Returns `LF_STATUS_OK` when equal and `LF_STATUS_FAIL` when not; the
/// mismatch is then described by [`lf_last_error_message`].
///
/// # Safety
/// `session` must be a live session; the strings must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn lf_def_equal(
    session: *const LfSession,
    family: *const c_char,
    left: *const c_char,
    right: *const c_char,
) -> LfStatus {
    guard(|| {
        let s = live(session)?;
        s.eq(
            text(family, "type")?,
            text(left, "left")?,
            text(right, "right")?,
        )?;
        Ok(())
    })
}

/// Computes the quasi-canonical form of `object` at `family`.
///
/// # Safety
/// `session` must be a live session, the strings NUL-terminated and `out`
/// valid.
#[no_mangle]
pub unsafe extern "C" fn lf_canonicalize(
    session: *const LfSession,
    family: *const c_char,
    object: *const c_char,
    out: *mut *mut c_char,
) -> LfStatus {
    guard(|| {
        let s = live(session)?;
        let r = s.canon(text(family, "type")?, text(object, "object")?)?;
        write_string(out, r)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn lf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn lf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
