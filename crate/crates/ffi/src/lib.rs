//! C ABI for the coregular library.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `_free` function. Every call returns a `CoregStatus`;
//! on failure `coreg_last_error` describes the problem for the calling
//! thread. Strings handed out by the library are released with
//! `coreg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coregular::cli::{self, Cli, Instance};
use coregular::homalg::Length;
use coregular::integer::ArtinianGroup;
use coregular::primes::DEFAULT_AVOID_BUDGET;
use coregular::sequence::{fdepth, fwidth, GradedWorld, IntegerWorld, Width};
use coregular::Error;
use num_bigint::BigInt;

/// Width reported for `infinity`.
pub const COREG_WIDTH_INFINITE: i64 = -1;
/// Width reported when the engine could not decide.
pub const COREG_WIDTH_UNDETERMINED: i64 = -2;
/// Length reported for modules of infinite length.
pub const COREG_LENGTH_INFINITE: i64 = -1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoregStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnresolvedReference = 4,
    InvalidArgument = 5,
    Unsupported = 6,
    BudgetExceeded = 7,
    Inconsistent = 8,
    Panic = 9,
}

/// A parsed instance file.
pub struct CoregInstance {
    inner: Instance,
}

/// An Artinian abelian group: finite part plus Prüfer part.
pub struct CoregArtinianGroup {
    inner: ArtinianGroup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> CoregStatus {
    match e {
        Error::Parse { .. } => CoregStatus::Parse,
        Error::UnresolvedReference(_) => CoregStatus::UnresolvedReference,
        Error::SearchBudgetExceeded { .. } | Error::EnumerationBudget(_) => CoregStatus::BudgetExceeded,
        Error::InternalInconsistency(_) | Error::NotExact(_) => CoregStatus::Inconsistent,
        e if e.is_unsupported() => CoregStatus::Unsupported,
        _ => CoregStatus::InvalidArgument,
    }
}

fn fail(e: &Error) -> CoregStatus {
    set_error(e.to_string());
    status_of(e)
}

/// Runs `f`, turning panics into `CoregStatus::Panic`.
fn guard(f: impl FnOnce() -> CoregStatus) -> CoregStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            CoregStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CoregStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(CoregStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        CoregStatus::InvalidUtf8
    })
}

fn width_code(w: Width) -> i64 {
    match w {
        Width::Finite(n) => n as i64,
        Width::Infinite => COREG_WIDTH_INFINITE,
        Width::Undetermined => COREG_WIDTH_UNDETERMINED,
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn coreg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coreg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses instance-file text. On a parse failure the message lists every
/// error as `line:column: message`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coreg_instance_parse(src: *const c_char, out: *mut *mut CoregInstance) -> CoregStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return CoregStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let src = match read_str(src) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match Instance::parse(src) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CoregInstance { inner }));
                CoregStatus::Ok
            }
            Err(errs) => {
                let lines: Vec<String> = errs
                    .iter()
                    .map(|e| match e {
                        Error::Parse { line, column, message } => format!("{line}:{column}: {message}"),
                        other => other.to_string(),
                    })
                    .collect();
                set_error(lines.join("\n"));
                errs.first().map_or(CoregStatus::Parse, status_of)
            }
        }
    })
}

/// # Safety
/// `inst` must be NULL or a handle from `coreg_instance_parse`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coreg_instance_free(inst: *mut CoregInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// `sha256:` digest of the canonical form; free with `coreg_string_free`.
///
/// # Safety
/// `inst` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn coreg_instance_digest(inst: *const CoregInstance) -> *mut c_char {
    match inst.as_ref() {
        Some(i) => into_c_string(cli::digest(&i.inner)),
        None => {
            set_error("null instance");
            ptr::null_mut()
        }
    }
}

/// `fwidth(ideal, artinian)` for named items of the instance, in either the
/// polynomial or the integer world. Writes a nonnegative width,
/// `COREG_WIDTH_INFINITE` or `COREG_WIDTH_UNDETERMINED`.
///
/// # Safety
/// `inst` must be a live handle, the names NUL-terminated strings and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coreg_fwidth(
    inst: *const CoregInstance,
    ideal: *const c_char,
    artinian: *const c_char,
    out: *mut i64,
) -> CoregStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            set_error("null instance or output pointer");
            return CoregStatus::NullPointer;
        };
        let (ideal, artinian) = match (read_str(ideal), read_str(artinian)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let inst = &inst.inner;
        let value = if inst.is_integer() {
            inst.int_ideal(ideal)
                .and_then(|a| Ok((a, inst.int_artinian(artinian)?)))
                .and_then(|(a, n)| fwidth(&IntegerWorld::default(), &a, &n))
                .map(|w| w.value)
        } else {
            inst.ideal(ideal)
                .and_then(|a| Ok((a, inst.artinian(artinian)?)))
                .and_then(|(a, n)| fwidth(&GradedWorld::new(a.ring()), &a, &n))
                .map(|w| w.value)
        };
        match value {
            Ok(w) => {
                *out = width_code(w);
                CoregStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// `fdepth(ideal, module)` over a polynomial ring, with the same encoding as
/// `coreg_fwidth`.
///
/// # Safety
/// As for `coreg_fwidth`.
#[no_mangle]
pub unsafe extern "C" fn coreg_fdepth(
    inst: *const CoregInstance,
    ideal: *const c_char,
    module: *const c_char,
    out: *mut i64,
) -> CoregStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            set_error("null instance or output pointer");
            return CoregStatus::NullPointer;
        };
        let (ideal, module) = match (read_str(ideal), read_str(module)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let inst = &inst.inner;
        if inst.is_integer() {
            return fail(&Error::UnsupportedModuleClass("fdepth needs a polynomial ring".into()));
        }
        match inst.ideal(ideal).and_then(|a| fdepth(&a, &inst.module(module)?, DEFAULT_AVOID_BUDGET)) {
            Ok(w) => {
                *out = width_code(w.value);
                CoregStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Runs a `coreg` command against the instance and hands back the JSON
/// report. `argv` holds the command and its flags without the program name
/// or instance path, e.g. `{"fwidth", "--ideal", "a", "--N", "N"}`.
/// `exit_code` receives the code the command line tool would exit with.
/// Usage errors return `CoregStatus::InvalidArgument` with the clap message.
///
/// # Safety
/// `inst` must be a live handle, `argv` must point to `argc` NUL-terminated
/// strings, and `out_json` and `exit_code` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn coreg_report(
    inst: *const CoregInstance,
    argc: usize,
    argv: *const *const c_char,
    out_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> CoregStatus {
    guard(|| {
        let Some(inst) = inst.as_ref() else {
            set_error("null instance");
            return CoregStatus::NullPointer;
        };
        if out_json.is_null() || exit_code.is_null() || (argc > 0 && argv.is_null()) {
            set_error("null argument vector or output pointer");
            return CoregStatus::NullPointer;
        }
        *out_json = ptr::null_mut();
        let mut args = vec!["coreg".to_string()];
        for k in 0..argc {
            match read_str(*argv.add(k)) {
                Ok(s) => args.push(s.to_string()),
                Err(s) => return s,
            }
            if k == 0 {
                args.push("-".into());
            }
        }
        let cli = match <Cli as clap::Parser>::try_parse_from(&args) {
            Ok(c) => c,
            Err(e) => {
                set_error(e.to_string());
                return CoregStatus::InvalidArgument;
            }
        };
        let (report, status) = cli::report_for(&cli, &inst.inner);
        *exit_code = status.exit_code();
        *out_json = into_c_string(cli::format_report(&report, cli::Format::Json));
        CoregStatus::Ok
    })
}

/// Builds `(+) Z/p^e (+) Z(q^inf)^k` from prime powers. `finite` holds
/// `finite_len` pairs `(p, e)` flattened; `prufer` holds `prufer_len` pairs
/// `(q, k)` flattened.
///
/// # Safety
/// The arrays must hold `2 * len` readable entries (or be NULL when the
/// length is 0) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coreg_artinian_group_new(
    finite: *const u64,
    finite_len: usize,
    prufer: *const u64,
    prufer_len: usize,
    out: *mut *mut CoregArtinianGroup,
) -> CoregStatus {
    guard(|| {
        if out.is_null() || (finite_len > 0 && finite.is_null()) || (prufer_len > 0 && prufer.is_null()) {
            set_error("null array or output pointer");
            return CoregStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let pairs = |p: *const u64, n: usize| -> Vec<(u64, u32)> {
            if n == 0 {
                return Vec::new();
            }
            std::slice::from_raw_parts(p, 2 * n).chunks(2).map(|c| (c[0], c[1].min(u32::MAX as u64) as u32)).collect()
        };
        match ArtinianGroup::new(pairs(finite, finite_len), pairs(prufer, prufer_len)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CoregArtinianGroup { inner }));
                CoregStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `g` must be NULL or a handle from `coreg_artinian_group_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coreg_artinian_group_free(g: *mut CoregArtinianGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Length of the group, or `COREG_LENGTH_INFINITE`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coreg_artinian_group_length(g: *const CoregArtinianGroup, out: *mut i64) -> CoregStatus {
    let (Some(g), false) = (g.as_ref(), out.is_null()) else {
        set_error("null group or output pointer");
        return CoregStatus::NullPointer;
    };
    *out = match g.inner.length() {
        Length::Finite(n) => n as i64,
        Length::Infinite => COREG_LENGTH_INFINITE,
    };
    CoregStatus::Ok
}

/// `fwidth((a), N)` over the integers.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coreg_artinian_group_fwidth(g: *const CoregArtinianGroup, a: i64, out: *mut i64) -> CoregStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            set_error("null group or output pointer");
            return CoregStatus::NullPointer;
        };
        match fwidth(&IntegerWorld::default(), &BigInt::from(a), &g.inner) {
            Ok(w) => {
                *out = width_code(w.value);
                CoregStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Canonical text of the group, e.g. `Z/4 + Z(2^inf)`; free with
/// `coreg_string_free`.
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn coreg_artinian_group_to_string(g: *const CoregArtinianGroup) -> *mut c_char {
    match g.as_ref() {
        Some(g) => into_c_string(g.inner.to_string()),
        None => {
            set_error("null group");
            ptr::null_mut()
        }
    }
}
