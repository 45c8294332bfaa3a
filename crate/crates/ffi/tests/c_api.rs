use std::ffi::{c_char, CStr, CString};
use std::ptr;

use fblnorm_ffi::*;

fn last_error() -> String {
    let p = fbl_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    fbl_string_free(p);
    s
}

fn parse(text: &str, n: usize) -> *mut FblExpr {
    let c = CString::new(text).unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { fbl_expr_parse(c.as_ptr(), n, &mut e) }, FblStatus::Ok);
    e
}

#[test]
fn parse_eval_format() {
    let e = parse("abs(d(e1)) \\/ d(e2)", 0);
    unsafe {
        assert_eq!(fbl_expr_dim(e), 2);
        let mut v = 0.0;
        assert_eq!(fbl_expr_eval(e, [-3.0, 1.0].as_ptr(), 2, &mut v), FblStatus::Ok);
        assert_eq!(v, 3.0);
        let mut s = ptr::null_mut();
        assert_eq!(fbl_expr_format(e, &mut s), FblStatus::Ok);
        let text = take_string(s);
        let back = parse(&text, 0);
        assert_eq!(fbl_expr_eval(back, [0.5, 4.0].as_ptr(), 2, &mut v), FblStatus::Ok);
        assert_eq!(v, 4.0);
        fbl_expr_free(back);
        fbl_expr_free(e);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let bad = CString::new("abs(d(e1)").unwrap();
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(fbl_expr_parse(bad.as_ptr(), 0, &mut e), FblStatus::Parse);
        assert!(e.is_null());
        assert!(last_error().contains("syntax error"));

        assert_eq!(fbl_expr_parse(ptr::null(), 0, &mut e), FblStatus::NullPointer);

        let f = parse("d(e1)", 2);
        let mut v = 0.0;
        assert_eq!(fbl_expr_eval(f, [1.0].as_ptr(), 1, &mut v), FblStatus::Dimension);
        assert_eq!(fbl_expr_eval(f, [1.0, 2.0].as_ptr(), 2, ptr::null_mut()), FblStatus::NullPointer);
        fbl_expr_free(f);

        let mut out = ptr::null_mut();
        let lambda = [1.0, 1.0];
        assert_eq!(fbl_certify_moduli(lambda.as_ptr(), 2, 0, 0.5, 0.0, &mut out), FblStatus::InvalidValue);
        assert_eq!(fbl_certify_moduli(lambda.as_ptr(), 2, 0, 4.0, 0.5, &mut out), FblStatus::Config);
    }
}

#[test]
fn family_constraint_and_objective() {
    // {e1, e2} in l_2^2: constraint sqrt(2), objective of |d(e1)| + |d(e2)| is 2
    let data = [1.0, 0.0, 0.0, 1.0];
    let mut fam = ptr::null_mut();
    unsafe {
        assert_eq!(fbl_family_new(2, 2.0, 2, data.as_ptr(), &mut fam), FblStatus::Ok);
        assert_eq!(fbl_family_len(fam), 2);
        let mut c = 0.0;
        assert_eq!(fbl_constraint_exact(fam, 0, &mut c), FblStatus::Ok);
        assert!((c - 2f64.sqrt()).abs() < 1e-15);
        let f = parse("abs(d(e1)) + abs(d(e2))", 0);
        let mut o = 0.0;
        assert_eq!(fbl_objective(f, fam, &mut o), FblStatus::Ok);
        assert_eq!(o, 2.0);
        fbl_expr_free(f);
        fbl_family_free(fam);
    }
}

#[test]
fn null_data_is_rejected() {
    let mut fam = ptr::null_mut();
    unsafe {
        assert_eq!(fbl_family_new(2, 2.0, 2, ptr::null(), &mut fam), FblStatus::NullPointer);
        assert_eq!(fbl_family_new(2, f64::INFINITY, 2, [0.0; 4].as_ptr(), &mut fam), FblStatus::Ok);
        fbl_family_free(fam);
    }
}

#[test]
fn certificate_json() {
    let lambda = [1.0, 1.0, 1.0, 1.0];
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(fbl_certify_moduli(lambda.as_ptr(), 4, 0, 4.0, 0.0, &mut out), FblStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert!((v["lower"].as_f64().unwrap() - 8f64.sqrt()).abs() < 1e-12);
        assert_eq!(v["certified"], true);
        assert_eq!(v["p"], 4.0);
    }
}

#[test]
fn optimize_json() {
    let e = parse("abs(d(e1))", 0);
    let cfg = CString::new(r#"{"restarts": 2, "iterations": 20, "seed": 7}"#).unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(fbl_optimize(e, 2.0, 1, cfg.as_ptr(), &mut out), FblStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert!((v["lower"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(v["family_size"], 1);

        let bad = CString::new(r#"{"colour": 1}"#).unwrap();
        assert_eq!(fbl_optimize(e, 2.0, 1, bad.as_ptr(), &mut out), FblStatus::Config);
        fbl_expr_free(e);
    }
}

#[test]
fn walsh_fill() {
    let mut needed = 0;
    unsafe {
        assert_eq!(fbl_walsh_fill(2, ptr::null_mut(), 0, &mut needed), FblStatus::BufferTooSmall);
        assert_eq!(needed, 16);
        let mut buf = [0i8; 16];
        assert_eq!(fbl_walsh_fill(2, buf.as_mut_ptr(), 16, ptr::null_mut()), FblStatus::Ok);
        assert_eq!(buf[..4], [1, 1, 1, 1]);
        assert_eq!(buf[4..8], [1, -1, 1, -1]);
        assert_eq!(fbl_walsh_fill(40, buf.as_mut_ptr(), 16, ptr::null_mut()), FblStatus::Capacity);
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fblnorm.h")).unwrap();
    for name in [
        "fbl_last_error",
        "fbl_string_free",
        "fbl_expr_parse",
        "fbl_expr_moduli",
        "fbl_expr_free",
        "fbl_expr_dim",
        "fbl_expr_eval",
        "fbl_expr_format",
        "fbl_family_new",
        "fbl_family_free",
        "fbl_family_len",
        "fbl_constraint_exact",
        "fbl_objective",
        "fbl_certify_moduli",
        "fbl_optimize",
        "fbl_walsh_fill",
        "typedef struct FblExpr FblExpr",
        "FBL_STATUS_CAPACITY = 9",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
