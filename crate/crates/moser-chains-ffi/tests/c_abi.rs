use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use moser_chains_ffi::*;

const SPHERE: &str = r#"{"trunc_order":6,"coeffs":[{"j":1,"k":1,"l":0,"re":"1","im":"0"}]}"#;
const PERTURBED: &str = r#"{"trunc_order":8,"coeffs":[
  {"j":1,"k":1,"l":0,"re":"1","im":"0"},
  {"j":4,"k":2,"l":0,"re":"1/10","im":"0"},
  {"j":2,"k":4,"l":0,"re":"1/10","im":"0"}]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { mc_string_free(p) };
    s
}

fn load(json: &str) -> *mut McHypersurface {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { mc_hypersurface_from_json(c(json).as_ptr(), &mut h) }, McStatus::Ok);
    h
}

#[test]
fn roundtrip_and_normalize() {
    let h = load(PERTURBED);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mc_hypersurface_to_json(h, &mut s) }, McStatus::Ok);
    assert!(take(s).contains("\"1/10\""));

    let mut out = ptr::null_mut();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { mc_normalize(h, 8, &mut out, &mut report) }, McStatus::Ok);
    let report = take(report);
    assert!(report.contains("kill-f33"));
    assert!(!report.contains("\"residual_zero\":false"));
    unsafe {
        mc_hypersurface_free(out);
        mc_hypersurface_free(h);
    }
}

#[test]
fn orbit_rank_on_and_off_the_locus() {
    let (mut rank, mut on) = (0u32, false);
    let st = unsafe {
        mc_orbit_rank(c("1").as_ptr(), c("0").as_ptr(), c("0").as_ptr(), c("2").as_ptr(), &mut rank, &mut on)
    };
    assert_eq!(st, McStatus::Ok);
    assert_eq!((rank, on), (2, true));
    let st = unsafe {
        mc_orbit_rank(c("1").as_ptr(), c("0").as_ptr(), c("0").as_ptr(), c("3").as_ptr(), &mut rank, &mut on)
    };
    assert_eq!(st, McStatus::Ok);
    assert_eq!((rank, on), (4, false));
}

#[test]
fn sphere_chain_completion() {
    let h = load(SPHERE);
    let (mut x2, mut y2) = (ptr::null_mut(), ptr::null_mut());
    let st = unsafe {
        mc_chain_2jet(
            h,
            c("0").as_ptr(),
            c("0").as_ptr(),
            c("0").as_ptr(),
            c("1").as_ptr(),
            c("0").as_ptr(),
            &mut x2,
            &mut y2,
        )
    };
    assert_eq!(st, McStatus::Ok);
    assert_eq!((take(x2), take(y2)), ("0".to_string(), "2".to_string()));
    unsafe { mc_hypersurface_free(h) };
}

#[test]
fn errors_are_reported() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { mc_hypersurface_from_json(c("{oops").as_ptr(), &mut h) }, McStatus::Parse);
    let msg = unsafe { CStr::from_ptr(mc_last_error_message()) }.to_str().unwrap().to_owned();
    assert!(msg.contains("parse"), "{msg}");
    assert!(h.is_null());

    assert_eq!(unsafe { mc_hypersurface_from_json(ptr::null(), &mut h) }, McStatus::NullArgument);

    let degenerate = load(r#"{"trunc_order":6,"coeffs":[{"j":2,"k":2,"l":0,"re":"1","im":"0"}]}"#);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mc_normalize(degenerate, 6, &mut out, ptr::null_mut()) }, McStatus::Precondition);
    assert!(out.is_null());
    unsafe { mc_hypersurface_free(degenerate) };

    let sphere = load(SPHERE);
    assert_eq!(unsafe { mc_normalize(sphere, 6, &mut out, ptr::null_mut()) }, McStatus::Ok);
    assert!(mc_last_error_message().is_null());
    unsafe {
        mc_hypersurface_free(out);
        mc_hypersurface_free(sphere);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/moser_chains.h");
    let Ok(status) =
        Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c", header]).status()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(status.success());
}
