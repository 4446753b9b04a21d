//! C ABI over the pattern-calculus rewriting engine.
//!
//! Terms cross the boundary as opaque [`RedexTerm`] handles; every fallible
//! entry point returns a [`RedexStatus`] and writes its results through out
//! pointers, which are set to null/zero before any work happens so callers
//! never read garbage after a failure. Strings and string arrays returned to
//! the caller are owned by the caller and must be released with
//! [`redex_string_free`] / [`redex_string_array_free`]; term handles with
//! [`redex_term_free`]. A human-readable description of the most recent
//! failure on the current thread is available from
//! [`redex_last_error_message`].
//!
//! Surface conventions match the `redex` CLI: terms use the
//! `\[x,y] PATTERN . BODY` / `^x` grammar, and positions are digit strings
//! over `1`/`2` with the empty string naming the root.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};

use redex_core::matching::compound_match;
use redex_core::reduction::redex_positions;
use redex_core::strategy::{normalize, s_pi};
use redex_core::syntax::parse_term;
use redex_core::{Match, Multistep, NormalizeOutcome, Position, Selection, Term};

/// Opaque handle to a term of the pattern calculus.
pub struct RedexTerm(Term);

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RedexStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input did not parse; `redex_last_error_message` has the reason.
    ParseError = 3,
    /// A position did not parse or does not point at a redex of the term.
    InvalidPosition = 4,
    /// Normalization did not reach a normal form within the given fuse.
    FuseExceeded = 5,
}

/// Decision of a compound match.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RedexMatchDecision {
    /// The pattern matches and produces bindings.
    Positive = 0,
    /// The match fails definitely (the redex contracts to its failure form).
    Fail = 1,
    /// Undecided: the term is not evaluated enough to decide the match.
    Wait = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<Vec<u8>>) {
    let message = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

/// Reads a required UTF-8 string argument.
///
/// # Safety
/// `ptr` must be null or a valid nul-terminated C string.
unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, RedexStatus> {
    if ptr.is_null() {
        return Err(RedexStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error("argument is not valid UTF-8");
        RedexStatus::InvalidUtf8
    })
}

fn export_term(t: Term) -> *mut RedexTerm {
    Box::into_raw(Box::new(RedexTerm(t)))
}

fn export_string(s: &str) -> *mut c_char {
    // Printed terms, positions and error messages never contain nul bytes.
    CString::new(s).expect("printed string has no nul byte").into_raw()
}

/// # Safety
/// `out` and `out_len` must be valid for writes.
unsafe fn write_string_array(
    items: impl IntoIterator<Item = String>,
    out: *mut *mut *mut c_char,
    out_len: *mut usize,
) {
    let ptrs: Box<[*mut c_char]> = items.into_iter().map(|s| export_string(&s)).collect();
    *out_len = ptrs.len();
    *out = Box::into_raw(ptrs) as *mut *mut c_char;
}

/// Parses a term from the surface syntax into a fresh handle.
///
/// # Safety
/// `input` must be a valid nul-terminated C string and `out` valid for
/// writes. On success `*out` owns the term and must be released with
/// [`redex_term_free`].
#[no_mangle]
pub unsafe extern "C" fn redex_term_parse(
    input: *const c_char,
    out: *mut *mut RedexTerm,
) -> RedexStatus {
    if out.is_null() {
        return RedexStatus::NullArgument;
    }
    *out = std::ptr::null_mut();
    let input = match str_arg(input) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match parse_term(input) {
        Ok(t) => {
            *out = export_term(t);
            RedexStatus::Ok
        }
        Err(err) => {
            set_last_error(err.to_string());
            RedexStatus::ParseError
        }
    }
}

/// Prints a term back into the surface syntax.
///
/// # Safety
/// `term` must be a live handle from this library and `out` valid for
/// writes. On success `*out` must be released with [`redex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn redex_term_print(
    term: *const RedexTerm,
    out: *mut *mut c_char,
) -> RedexStatus {
    if term.is_null() || out.is_null() {
        return RedexStatus::NullArgument;
    }
    *out = export_string(&(*term).0.to_string());
    RedexStatus::Ok
}

/// Writes the number of nodes of the term.
///
/// # Safety
/// `term` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn redex_term_size(
    term: *const RedexTerm,
    out: *mut usize,
) -> RedexStatus {
    if term.is_null() || out.is_null() {
        return RedexStatus::NullArgument;
    }
    *out = (*term).0.size();
    RedexStatus::Ok
}

/// Lists the positions of the contractible redexes of the term, in
/// left-to-right order, as digit strings (the empty string is the root).
///
/// # Safety
/// `term` must be a live handle; `out` and `out_len` must be valid for
/// writes. On success the array must be released with
/// [`redex_string_array_free`] using the same length.
#[no_mangle]
pub unsafe extern "C" fn redex_term_redexes(
    term: *const RedexTerm,
    out: *mut *mut *mut c_char,
    out_len: *mut usize,
) -> RedexStatus {
    if term.is_null() || out.is_null() || out_len.is_null() {
        return RedexStatus::NullArgument;
    }
    *out = std::ptr::null_mut();
    *out_len = 0;
    let positions = redex_positions(&(*term).0);
    write_string_array(positions.iter().map(Position::to_string), out, out_len);
    RedexStatus::Ok
}

/// Contracts the redex at `position` and writes the resulting term.
///
/// # Safety
/// `term` must be a live handle, `position` a valid nul-terminated C
/// string, and `out` valid for writes. On success `*out` must be released
/// with [`redex_term_free`].
#[no_mangle]
pub unsafe extern "C" fn redex_term_step(
    term: *const RedexTerm,
    position: *const c_char,
    out: *mut *mut RedexTerm,
) -> RedexStatus {
    if term.is_null() || out.is_null() {
        return RedexStatus::NullArgument;
    }
    *out = std::ptr::null_mut();
    let position = match str_arg(position) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match contract(&(*term).0, std::iter::once(position)) {
        Ok(t) => {
            *out = export_term(t);
            RedexStatus::Ok
        }
        Err(status) => status,
    }
}

/// Simultaneously contracts the redexes at `positions` (a complete
/// development of the set) and writes the resulting term.
///
/// # Safety
/// `term` must be a live handle; `positions` must point to `len` valid
/// nul-terminated C strings; `out` must be valid for writes. On success
/// `*out` must be released with [`redex_term_free`].
#[no_mangle]
pub unsafe extern "C" fn redex_term_develop(
    term: *const RedexTerm,
    positions: *const *const c_char,
    len: usize,
    out: *mut *mut RedexTerm,
) -> RedexStatus {
    if term.is_null() || out.is_null() || (positions.is_null() && len > 0) {
        return RedexStatus::NullArgument;
    }
    *out = std::ptr::null_mut();
    let mut strings = Vec::with_capacity(len);
    for i in 0..len {
        match str_arg(*positions.add(i)) {
            Ok(s) => strings.push(s),
            Err(status) => return status,
        }
    }
    match contract(&(*term).0, strings) {
        Ok(t) => {
            *out = export_term(t);
            RedexStatus::Ok
        }
        Err(status) => status,
    }
}

fn contract<'a>(
    term: &Term,
    positions: impl IntoIterator<Item = &'a str>,
) -> Result<Term, RedexStatus> {
    let mut parsed = Vec::new();
    for s in positions {
        parsed.push(Position::parse(s).map_err(|err| {
            set_last_error(err.to_string());
            RedexStatus::InvalidPosition
        })?);
    }
    let multistep = Multistep::new(term.clone(), parsed).map_err(|err| {
        set_last_error(err.to_string());
        RedexStatus::InvalidPosition
    })?;
    Ok(multistep.target())
}

/// Normalizes the term with the necessary-and-never-gripping strategy,
/// contracting one selected step set per round for at most `fuse` rounds.
/// Writes the normal form and the number of rounds taken; when the fuse is
/// exhausted first, returns `FuseExceeded` with `*out` left null and
/// `*out_rounds` equal to `fuse`.
///
/// # Safety
/// `term` must be a live handle; `out` and `out_rounds` must be valid for
/// writes. On success `*out` must be released with [`redex_term_free`].
#[no_mangle]
pub unsafe extern "C" fn redex_term_normalize(
    term: *const RedexTerm,
    fuse: usize,
    out: *mut *mut RedexTerm,
    out_rounds: *mut usize,
) -> RedexStatus {
    if term.is_null() || out.is_null() || out_rounds.is_null() {
        return RedexStatus::NullArgument;
    }
    *out = std::ptr::null_mut();
    *out_rounds = 0;
    let trace = normalize(&(*term).0, Selection::NecessaryS, fuse)
        .expect("the necessary strategy is total on pattern-calculus terms");
    *out_rounds = trace.rounds.len();
    match trace.outcome {
        NormalizeOutcome::NormalForm(t) => {
            *out = export_term(t);
            RedexStatus::Ok
        }
        NormalizeOutcome::FuseExceeded => {
            set_last_error(format!("no normal form within {fuse} rounds"));
            RedexStatus::FuseExceeded
        }
    }
}

/// Lists the step set the normalizing strategy selects on the term, as
/// position strings; the array is empty exactly when the term is a normal
/// form.
///
/// # Safety
/// `term` must be a live handle; `out` and `out_len` must be valid for
/// writes. On success the array must be released with
/// [`redex_string_array_free`] using the same length.
#[no_mangle]
pub unsafe extern "C" fn redex_term_strategy(
    term: *const RedexTerm,
    out: *mut *mut *mut c_char,
    out_len: *mut usize,
) -> RedexStatus {
    if term.is_null() || out.is_null() || out_len.is_null() {
        return RedexStatus::NullArgument;
    }
    *out = std::ptr::null_mut();
    *out_len = 0;
    let selected = s_pi(&(*term).0);
    write_string_array(selected.iter().map(Position::to_string), out, out_len);
    RedexStatus::Ok
}

/// Matches `term` against `pattern` under the binders named in `binders`
/// (comma-separated; the empty string binds nothing). Writes the decision
/// and, when positive, one `name := term` string per binding.
///
/// # Safety
/// `binders` must be a valid nul-terminated C string; `term` and `pattern`
/// must be live handles; `out_decision`, `out_bindings` and `out_len` must
/// be valid for writes. On success the bindings array must be released with
/// [`redex_string_array_free`] using the same length.
#[no_mangle]
pub unsafe extern "C" fn redex_match(
    binders: *const c_char,
    term: *const RedexTerm,
    pattern: *const RedexTerm,
    out_decision: *mut RedexMatchDecision,
    out_bindings: *mut *mut *mut c_char,
    out_len: *mut usize,
) -> RedexStatus {
    if term.is_null()
        || pattern.is_null()
        || out_decision.is_null()
        || out_bindings.is_null()
        || out_len.is_null()
    {
        return RedexStatus::NullArgument;
    }
    *out_bindings = std::ptr::null_mut();
    *out_len = 0;
    let binders = match str_arg(binders) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let theta: BTreeSet<String> = binders
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    match compound_match(&theta, &(*term).0, &(*pattern).0) {
        Match::Positive(sub) => {
            *out_decision = RedexMatchDecision::Positive;
            write_string_array(
                sub.0.iter().map(|(x, t)| format!("{x} := {t}")),
                out_bindings,
                out_len,
            );
        }
        Match::Fail => *out_decision = RedexMatchDecision::Fail,
        Match::Wait => *out_decision = RedexMatchDecision::Wait,
    }
    RedexStatus::Ok
}

/// Returns the description of the most recent failure on this thread, or
/// null if nothing has failed yet. The caller owns the string.
///
/// # Safety
/// The returned string, when not null, must be released with
/// [`redex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn redex_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(message) => message.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Releases a term handle. Null is ignored.
///
/// # Safety
/// `term` must be null or a handle returned by this library that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn redex_term_free(term: *mut RedexTerm) {
    if !term.is_null() {
        drop(Box::from_raw(term));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn redex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a string array returned by this library, including its
/// elements. Null is ignored.
///
/// # Safety
/// `array` must be null or an array of `len` strings returned by this
/// library, none of them freed yet.
#[no_mangle]
pub unsafe extern "C" fn redex_string_array_free(array: *mut *mut c_char, len: usize) {
    if array.is_null() {
        return;
    }
    let boxed: Box<[*mut c_char]> =
        Box::from_raw(std::ptr::slice_from_raw_parts_mut(array, len));
    for &s in boxed.iter() {
        redex_string_free(s);
    }
}
