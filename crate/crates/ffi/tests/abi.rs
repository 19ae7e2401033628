use std::ffi::{CStr, CString};
use std::ptr;

use orbifrob_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { orbifrob_string_free(s) };
    out
}

fn engine() -> *mut OrbifrobEngine {
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { orbifrob_engine_new(ptr::null(), 0, &mut e) }, OrbifrobStatus::Ok);
    e
}

#[test]
fn hurwitz_and_classify() {
    let e = engine();
    let mut out = ptr::null_mut();
    let prof = CString::new("(2);(2)").unwrap();
    assert_eq!(unsafe { orbifrob_hurwitz_number(e, 0, 0, 2, prof.as_ptr(), true, &mut out) }, OrbifrobStatus::Ok);
    assert_eq!(take(out), "1/2");

    let (mut poly, mut fam) = (false, OrbifrobFamily::A);
    let orders = [2u32, 3, 5];
    assert_eq!(unsafe { orbifrob_classify(orders.as_ptr(), 3, &mut poly, &mut fam) }, OrbifrobStatus::Ok);
    assert!(poly);
    assert_eq!(fam, OrbifrobFamily::E);
    unsafe { orbifrob_engine_free(e) };
}

#[test]
fn potential_round_trip() {
    let e = engine();
    let mut f = ptr::null_mut();
    let orders = [2u32, 2, 3];
    assert_eq!(unsafe { orbifrob_potential_assemble(e, orders.as_ptr(), 3, 0, 0, &mut f) }, OrbifrobStatus::Ok);
    let mut n = usize::MAX;
    assert_eq!(unsafe { orbifrob_potential_wdvv_violations(f, &mut n) }, OrbifrobStatus::Ok);
    assert_eq!(n, 0);
    let mut js = ptr::null_mut();
    assert_eq!(unsafe { orbifrob_potential_to_json(f, &mut js) }, OrbifrobStatus::Ok);
    let text = CString::new(take(js)).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { orbifrob_potential_from_json(text.as_ptr(), &mut g) }, OrbifrobStatus::Ok);
    let mut js2 = ptr::null_mut();
    unsafe { orbifrob_potential_to_json(g, &mut js2) };
    assert_eq!(take(js2), text.to_str().unwrap());
    unsafe {
        orbifrob_potential_free(f);
        orbifrob_potential_free(g);
        orbifrob_engine_free(e);
    }
}

#[test]
fn resource_cap_and_last_error() {
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { orbifrob_engine_new(ptr::null(), 4, &mut e) }, OrbifrobStatus::Ok);
    let prof = CString::new("(6);(6)").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { orbifrob_hurwitz_number(e, 0, 0, 6, prof.as_ptr(), true, &mut out) }, OrbifrobStatus::Resource);
    let msg = unsafe { CStr::from_ptr(orbifrob_last_error()) }.to_str().unwrap();
    assert!(msg.contains("exceeds"), "{msg}");
    assert_eq!(unsafe { orbifrob_hurwitz_number(e, 0, 0, 2, ptr::null(), true, &mut out) }, OrbifrobStatus::NullPointer);
    unsafe { orbifrob_engine_free(e) };
}

#[test]
fn mirror_check_d4() {
    let e = engine();
    let mut passed = false;
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { orbifrob_mirror_check(e, 2, 2, 2, &mut passed, &mut rep) }, OrbifrobStatus::Ok);
    assert!(passed);
    let v: serde_json::Value = serde_json::from_str(&take(rep)).unwrap();
    assert_eq!(v["orders"], serde_json::json!([2, 2, 2]));
    assert_eq!(unsafe { orbifrob_mirror_check(e, 3, 3, 3, &mut passed, ptr::null_mut()) }, OrbifrobStatus::Invalid);
    unsafe { orbifrob_engine_free(e) };
}
