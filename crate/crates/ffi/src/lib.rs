//! C interface to the `tfsm` crate.
//!
//! Machines live behind opaque handles created by the parse and transform
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`TfsmStatus`]; on failure a description is available from
//! [`tfsm_last_error`] until the next call on the same thread. Strings handed
//! out by the library are NUL-terminated UTF-8 and must be released with
//! [`tfsm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tfsm::{FormatError, MealyMachine, PipelineError, RunResult, TimedEquivalence, TimedMachine, TimedWord};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TfsmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    AlphabetMismatch = 5,
    NotTimeProgressive = 6,
    /// `tfsm_simulate` only: the machine has no transition for some input.
    Rejected = 7,
    Internal = 8,
}

/// Opaque timed machine.
pub struct TfsmTimed(TimedMachine);

/// Opaque untimed Mealy machine.
pub struct TfsmMealy(MealyMachine);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Fail(TfsmStatus, String);

type Res<T> = Result<T, Fail>;

impl From<FormatError> for Fail {
    fn from(e: FormatError) -> Self {
        let status = match e {
            FormatError::Syntax { .. } => TfsmStatus::ParseError,
            FormatError::Invalid(_) => TfsmStatus::ValidationError,
        };
        Fail(status, e.to_string())
    }
}

impl From<PipelineError> for Fail {
    fn from(e: PipelineError) -> Self {
        let status = match e {
            PipelineError::Invalid { .. } => TfsmStatus::ValidationError,
            PipelineError::Alphabet(_) => TfsmStatus::AlphabetMismatch,
            PipelineError::Refine(_) => TfsmStatus::NotTimeProgressive,
            PipelineError::Unconfirmed { .. } => TfsmStatus::Internal,
        };
        Fail(status, e.to_string())
    }
}

/// Runs `body`, turning errors and panics into a status and the last-error
/// message.
fn guard(body: impl FnOnce() -> Res<()>) -> TfsmStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TfsmStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TfsmStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Res<&'a str> {
    if p.is_null() {
        return Err(Fail(TfsmStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(TfsmStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Res<&'a T> {
    p.as_ref()
        .ok_or_else(|| Fail(TfsmStatus::NullArgument, "null handle argument".into()))
}

fn out_ptr<T>(p: *mut T) -> Res<*mut T> {
    if p.is_null() {
        Err(Fail(TfsmStatus::NullArgument, "null output argument".into()))
    } else {
        Ok(p)
    }
}

fn c_string(s: String) -> Res<*mut c_char> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Fail(TfsmStatus::Internal, e.to_string()))
}

/// Message of the last failed call on this thread, or an empty string.
/// Owned by the library; valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn tfsm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tfsm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a timed machine in the text format.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_timed_parse(source: *const c_char, out: *mut *mut TfsmTimed) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let m = tfsm::parse_tfsm(text(source)?)?;
        *out = Box::into_raw(Box::new(TfsmTimed(m)));
        Ok(())
    })
}

/// Parses an untimed machine in the text format.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_mealy_parse(source: *const c_char, out: *mut *mut TfsmMealy) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let m = tfsm::parse_fsm(text(source)?)?;
        *out = Box::into_raw(Box::new(TfsmMealy(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library that was not freed.
#[no_mangle]
pub unsafe extern "C" fn tfsm_timed_free(m: *mut TfsmTimed) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be null or a handle from this library that was not freed.
#[no_mangle]
pub unsafe extern "C" fn tfsm_mealy_free(m: *mut TfsmMealy) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_timed_serialize(m: *const TfsmTimed, out: *mut *mut c_char) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = c_string(tfsm::serialize_tfsm(&handle(m)?.0))?;
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_mealy_serialize(m: *const TfsmMealy, out: *mut *mut c_char) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = c_string(tfsm::serialize_fsm(&handle(m)?.0))?;
        Ok(())
    })
}

/// Tick abstraction of a timed machine. Unreachable abstract states are
/// kept when `keep_unreachable` is true.
///
/// # Safety
/// `m` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_abstract(
    m: *const TfsmTimed,
    keep_unreachable: bool,
    out: *mut *mut TfsmMealy,
) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let a = tfsm::abstract_fsm(&handle(m)?.0, keep_unreachable);
        *out = Box::into_raw(Box::new(TfsmMealy(a)));
        Ok(())
    })
}

/// Timed machine of a time-progressive FSM. With `merge` false every clock
/// interval keeps its own transition.
///
/// # Safety
/// `m` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_refine(m: *const TfsmMealy, merge: bool, out: *mut *mut TfsmTimed) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let t = tfsm::refine_with(&handle(m)?.0, tfsm::RefineOptions { merge })
            .map_err(|e| Fail(TfsmStatus::NotTimeProgressive, e.to_string()))?;
        *out = Box::into_raw(Box::new(TfsmTimed(t)));
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_minimize(m: *const TfsmMealy, out: *mut *mut TfsmMealy) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = Box::into_raw(Box::new(TfsmMealy(tfsm::minimize(&handle(m)?.0))));
        Ok(())
    })
}

/// Intersection of two timed machines over the same alphabets.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_intersect(
    a: *const TfsmTimed,
    b: *const TfsmTimed,
    out: *mut *mut TfsmTimed,
) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let t = tfsm::tfsm_intersect(&handle(a)?.0, &handle(b)?.0)?;
        *out = Box::into_raw(Box::new(TfsmTimed(t)));
        Ok(())
    })
}

unsafe fn report(equal: *mut bool, witness: *mut *mut c_char, cex: Option<String>) -> Res<()> {
    *out_ptr(equal)? = cex.is_none();
    if !witness.is_null() {
        *witness = match cex {
            Some(c) => c_string(c)?,
            None => ptr::null_mut(),
        };
    }
    Ok(())
}

/// Decides equivalence of two timed machines. `*equal` receives the answer;
/// when `witness` is not null it receives a description of a distinguishing
/// timed word, or null if the machines are equivalent.
///
/// # Safety
/// `a` and `b` must be live handles, `equal` writable, `witness` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tfsm_timed_equivalent(
    a: *const TfsmTimed,
    b: *const TfsmTimed,
    equal: *mut bool,
    witness: *mut *mut c_char,
) -> TfsmStatus {
    guard(|| {
        let cex = match tfsm::tfsm_equivalent(&handle(a)?.0, &handle(b)?.0)? {
            TimedEquivalence::Equivalent => None,
            TimedEquivalence::Distinguished(c) => Some(c.to_string()),
        };
        report(equal, witness, cex)
    })
}

/// Equivalence of two untimed machines, reported like
/// [`tfsm_timed_equivalent`].
///
/// # Safety
/// `a` and `b` must be live handles, `equal` writable, `witness` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tfsm_mealy_equivalent(
    a: *const TfsmMealy,
    b: *const TfsmMealy,
    equal: *mut bool,
    witness: *mut *mut c_char,
) -> TfsmStatus {
    guard(|| {
        let (a, b) = (&handle(a)?.0, &handle(b)?.0);
        tfsm::algebra::check_same_alphabets("input", a.inputs(), b.inputs())
            .map_err(|e| Fail(TfsmStatus::AlphabetMismatch, e.to_string()))?;
        let cex = tfsm::equivalent(a, b).counterexample().map(ToString::to_string);
        report(equal, witness, cex)
    })
}

/// Runs the machine on `word`, written as `SYMBOL@TIME` items with absolute
/// times (`"i@0.5 i@3/2"`). On success `*output` receives the timed output
/// word; a rejected input gives [`TfsmStatus::Rejected`].
///
/// # Safety
/// `m` must be a live handle, `word` a NUL-terminated string and `output`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tfsm_simulate(
    m: *const TfsmTimed,
    word: *const c_char,
    output: *mut *mut c_char,
) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(output)?;
        let w: TimedWord = text(word)?
            .parse()
            .map_err(|e: tfsm::word::TimedWordError| Fail(TfsmStatus::ParseError, e.to_string()))?;
        match tfsm::run(&handle(m)?.0, &w) {
            RunResult::Accepted { output, .. } => {
                *out = c_string(output.to_string())?;
                Ok(())
            }
            RunResult::Rejected { index } => Err(Fail(
                TfsmStatus::Rejected,
                format!("rejected at input {} ({})", index + 1, w.as_slice()[index].0),
            )),
        }
    })
}

/// # Safety
/// `m` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_timed_export_dot(m: *const TfsmTimed, out: *mut *mut c_char) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = c_string(tfsm::export_dot_tfsm(&handle(m)?.0))?;
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_mealy_export_dot(m: *const TfsmMealy, out: *mut *mut c_char) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = c_string(tfsm::export_dot_fsm(&handle(m)?.0))?;
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tfsm_export_timed_automaton(m: *const TfsmTimed, out: *mut *mut c_char) -> TfsmStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = c_string(tfsm::export_timed_automaton(&handle(m)?.0))?;
        Ok(())
    })
}
