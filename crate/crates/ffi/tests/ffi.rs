use std::ffi::{CStr, CString};
use std::ptr;

use coregular_ffi::*;

const E1: &str = include_str!("../../core/instances/e1.inst");
const E3: &str = include_str!("../../core/instances/e3.inst");
const PRUFER: &str = include_str!("../../core/instances/prufer.inst");

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn parse(src: &str) -> *mut CoregInstance {
    let src = c(src);
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { coreg_instance_parse(src.as_ptr(), &mut inst) }, CoregStatus::Ok);
    assert!(!inst.is_null());
    inst
}

fn last_error() -> String {
    let p = coreg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn width(inst: *const CoregInstance, ideal: &str, n: &str) -> (CoregStatus, i64) {
    let (ideal, n) = (c(ideal), c(n));
    let mut out = i64::MIN;
    let s = unsafe { coreg_fwidth(inst, ideal.as_ptr(), n.as_ptr(), &mut out) };
    (s, out)
}

fn report(inst: *const CoregInstance, args: &[&str]) -> (CoregStatus, serde_json::Value, i32) {
    let owned: Vec<CString> = args.iter().map(|a| c(a)).collect();
    let argv: Vec<*const std::ffi::c_char> = owned.iter().map(|a| a.as_ptr()).collect();
    let mut json = ptr::null_mut();
    let mut code = -1;
    let s = unsafe { coreg_report(inst, argv.len(), argv.as_ptr(), &mut json, &mut code) };
    if s != CoregStatus::Ok {
        assert!(json.is_null());
        return (s, serde_json::Value::Null, code);
    }
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    unsafe { coreg_string_free(json) };
    (s, serde_json::from_str(&text).unwrap(), code)
}

#[test]
fn widths_in_both_worlds() {
    let e1 = parse(E1);
    let e3 = parse(E3);
    let z = parse(PRUFER);
    assert_eq!(width(e1, "a", "N"), (CoregStatus::Ok, 1));
    assert_eq!(width(e3, "a", "N"), (CoregStatus::Ok, COREG_WIDTH_INFINITE));
    assert_eq!(width(z, "a", "N"), (CoregStatus::Ok, COREG_WIDTH_INFINITE));
    unsafe {
        coreg_instance_free(e1);
        coreg_instance_free(e3);
        coreg_instance_free(z);
    }
}

#[test]
fn fdepth_of_quotient() {
    let e1 = parse(E1);
    let (a, m) = (c("a"), c("M"));
    let mut out = i64::MIN;
    assert_eq!(unsafe { coreg_fdepth(e1, a.as_ptr(), m.as_ptr(), &mut out) }, CoregStatus::Ok);
    assert!(out >= 0 || out == COREG_WIDTH_INFINITE);
    let z = parse(PRUFER);
    assert_eq!(unsafe { coreg_fdepth(z, a.as_ptr(), m.as_ptr(), &mut out) }, CoregStatus::Unsupported);
    unsafe {
        coreg_instance_free(e1);
        coreg_instance_free(z);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let src = c("[ring]\nfield = QQ\nvars = x\n\n[ideal a]\ngens = z\n");
    let mut inst = ptr::null_mut();
    let s = unsafe { coreg_instance_parse(src.as_ptr(), &mut inst) };
    assert_eq!(s, CoregStatus::Parse);
    assert!(inst.is_null());
    assert!(last_error().starts_with("6:"), "{}", last_error());
}

#[test]
fn unknown_names_and_nulls() {
    let e1 = parse(E1);
    assert_eq!(width(e1, "b", "N").0, CoregStatus::UnresolvedReference);
    assert!(last_error().contains('b'));
    assert_eq!(width(ptr::null(), "a", "N").0, CoregStatus::NullPointer);
    let a = c("a");
    let mut out = 0;
    assert_eq!(unsafe { coreg_fwidth(e1, a.as_ptr(), ptr::null(), &mut out) }, CoregStatus::NullPointer);
    assert_eq!(unsafe { coreg_fwidth(e1, a.as_ptr(), a.as_ptr(), ptr::null_mut()) }, CoregStatus::NullPointer);
    let bad = [b'a', 0xff, 0];
    assert_eq!(unsafe { coreg_fwidth(e1, bad.as_ptr().cast(), a.as_ptr(), &mut out) }, CoregStatus::InvalidUtf8);
    assert!(unsafe { coreg_instance_digest(ptr::null()) }.is_null());
    unsafe {
        coreg_instance_free(e1);
        coreg_instance_free(ptr::null_mut());
        coreg_string_free(ptr::null_mut());
    }
}

#[test]
fn digest_is_stable() {
    let (a, b) = (parse(E1), parse(E1));
    let (da, db) = unsafe { (coreg_instance_digest(a), coreg_instance_digest(b)) };
    let (sa, sb) = unsafe { (CStr::from_ptr(da).to_owned(), CStr::from_ptr(db).to_owned()) };
    assert_eq!(sa, sb);
    assert!(sa.to_str().unwrap().starts_with("sha256:"));
    unsafe {
        coreg_string_free(da);
        coreg_string_free(db);
        coreg_instance_free(a);
        coreg_instance_free(b);
    }
}

#[test]
fn reports_match_the_command_line() {
    let e1 = parse(E1);
    let (s, v, code) = report(e1, &["fwidth", "--ideal", "a", "--N", "N"]);
    assert_eq!((s, code), (CoregStatus::Ok, 0));
    assert_eq!(v["schema"], "coreg-report/1");
    assert_eq!(v["result"]["fwidth"], 1);
    let (s, v, code) = report(e1, &["fwidth", "--ideal", "nope", "--N", "N"]);
    assert_eq!(s, CoregStatus::Ok);
    assert_eq!(code, 2);
    assert!(v["errors"].is_array());
    let (s, _, _) = report(e1, &["no-such-command"]);
    assert_eq!(s, CoregStatus::InvalidArgument);
    assert!(!last_error().is_empty());
    unsafe { coreg_instance_free(e1) };
}

#[test]
fn artinian_group_handles() {
    let finite = [2u64, 2, 3, 1];
    let prufer = [2u64, 1];
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { coreg_artinian_group_new(finite.as_ptr(), 2, prufer.as_ptr(), 1, &mut g) }, CoregStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { coreg_artinian_group_length(g, &mut len) }, CoregStatus::Ok);
    assert_eq!(len, COREG_LENGTH_INFINITE);
    let mut w = 0;
    assert_eq!(unsafe { coreg_artinian_group_fwidth(g, 5, &mut w) }, CoregStatus::Ok);
    assert_eq!(w, COREG_WIDTH_INFINITE);
    let text = unsafe { coreg_artinian_group_to_string(g) };
    assert!(unsafe { CStr::from_ptr(text) }.to_str().unwrap().contains("Z/4"));
    unsafe {
        coreg_string_free(text);
        coreg_artinian_group_free(g);
    }

    let mut h = ptr::null_mut();
    assert_eq!(unsafe { coreg_artinian_group_new(finite.as_ptr(), 2, ptr::null(), 0, &mut h) }, CoregStatus::Ok);
    assert_eq!(unsafe { coreg_artinian_group_length(h, &mut len) }, CoregStatus::Ok);
    assert_eq!(len, 3);
    unsafe { coreg_artinian_group_free(h) };

    let not_prime = [4u64, 1];
    let mut bad = ptr::null_mut();
    let s = unsafe { coreg_artinian_group_new(not_prime.as_ptr(), 1, ptr::null(), 0, &mut bad) };
    assert_ne!(s, CoregStatus::Ok);
    assert!(bad.is_null());
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/coregular.h")).unwrap();
    for name in [
        "COREGULAR_H",
        "typedef struct CoregInstance CoregInstance",
        "COREG_STATUS_OK = 0",
        "COREG_WIDTH_INFINITE -1",
        "coreg_instance_parse(const char *src, struct CoregInstance **out)",
        "coreg_fwidth(",
        "coreg_fdepth(",
        "coreg_report(",
        "coreg_last_error(void)",
        "coreg_artinian_group_fwidth(",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
