use std::ffi::{CStr, CString};
use std::ptr;

use quadlie_ffi::*;

const N23: &str = r#"{"field":"Q","gram":[["0","0","-1"],["0","1","0"],["-1","0","0"]],"delta":[["0","1","0"],["0","0","1"],["0","0","0"]]}"#;
const ROTATION: &str = r#"{"field":"Q","gram":[["1","0"],["0","1"]],"delta":[["0","-1"],["1","0"]]}"#;

fn load(text: &str) -> *mut QlOscillator {
    let c = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ql_oscillator_from_json(c.as_ptr(), &mut h) }, QlStatus::Ok);
    assert!(!h.is_null());
    h
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ql_string_free(s) };
    out
}

#[test]
fn handle_lifecycle_and_queries() {
    let h = load(N23);
    let mut n = 0usize;
    assert_eq!(unsafe { ql_oscillator_dim(h, &mut n) }, QlStatus::Ok);
    assert_eq!(n, 3);
    assert_eq!(unsafe { ql_quadratic_dimension(h, &mut n) }, QlStatus::Ok);
    assert_eq!(n, 4);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ql_classify_nilpotent(h, &mut s) }, QlStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["k"], 3);
    assert_eq!(v["blocks"][0]["mu_class"], "-1");
    unsafe { ql_oscillator_free(h) };
}

#[test]
fn decisions_cross_the_boundary() {
    let a = load(ROTATION);
    let b = load(ROTATION);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ql_decide_isometric(a, b, &mut s) }, QlStatus::Ok);
    assert!(take(s).contains("\"decision\": \"yes\""));
    let n23 = load(N23);
    assert_eq!(unsafe { ql_decide_isometric(a, n23, &mut s) }, QlStatus::Precondition);
    let mut msg = ptr::null_mut();
    assert_eq!(unsafe { ql_last_error(&mut msg) }, QlStatus::Ok);
    assert!(take(msg).contains("invertible"));
    unsafe {
        ql_oscillator_free(a);
        ql_oscillator_free(b);
        ql_oscillator_free(n23);
    }
}

#[test]
fn errors_are_codes_not_crashes() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ql_oscillator_from_json(ptr::null(), &mut h) }, QlStatus::NullPointer);
    let bad = CString::new("{not json").unwrap();
    assert_eq!(unsafe { ql_oscillator_from_json(bad.as_ptr(), &mut h) }, QlStatus::Validation);
    let not_skew = CString::new(r#"{"field":"Fp:5","gram":[["1","0"],["0","1"]],"delta":[["1","0"],["0","0"]]}"#).unwrap();
    assert_ne!(unsafe { ql_oscillator_from_json(not_skew.as_ptr(), &mut h) }, QlStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { ql_oscillator_dim(ptr::null(), &mut n) }, QlStatus::NullPointer);
    unsafe {
        ql_oscillator_free(ptr::null_mut());
        ql_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(ql_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_abi() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/quadlie.h")).unwrap();
    for sym in ["ql_oscillator_from_json", "ql_oscillator_free", "ql_decide_isometric", "QL_STATUS_CAPABILITY", "QlOscillator"] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
}
