// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use zw_ffi::*;

fn parse_term(src: &str) -> Result<*mut ZwDiagram, ZwStatus> {
    let c = CString::new(src).unwrap();
    let mut d = ptr::null_mut();
    match unsafe { zw_diagram_from_term(c.as_ptr(), &mut d) } {
        ZwStatus::Ok => Ok(d),
        s => {
            assert!(d.is_null());
            Err(s)
        }
    }
}

/// Copy a library string and release it.
fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { zw_string_free(s) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(zw_last_error()) }.to_str().unwrap().to_owned()
}

fn eval(d: *const ZwDiagram, modulus: u64) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { zw_eval(d, modulus, 0, &mut s) }, ZwStatus::Ok);
    take(s)
}

#[test]
fn parse_inspect_and_evaluate() {
    let d = parse_term("cup;cap").unwrap();
    assert_eq!(unsafe { zw_diagram_num_legs(d) }, 0);
    assert_eq!(eval(d, 0), "- 2\n");
    unsafe { zw_diagram_free(d) };

    let d = parse_term("w(0,3)").unwrap();
    assert_eq!(unsafe { (zw_diagram_num_legs(d), zw_diagram_num_vertices(d)) }, (3, 1));
    assert_eq!(eval(d, 2), "001 1\n010 1\n100 1\n");
    unsafe { zw_diagram_free(d) };
}

#[test]
fn json_round_trip() {
    let d = parse_term("x;(w(1,1)*id)").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { zw_diagram_to_json(d, &mut s) }, ZwStatus::Ok);
    let json = CString::new(take(s)).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { zw_diagram_from_json(json.as_ptr(), &mut back) }, ZwStatus::Ok);
    assert_eq!(eval(back, 0), eval(d, 0));
    unsafe {
        zw_diagram_free(back);
        zw_diagram_free(d);
    }
}

#[test]
fn normalize_gives_a_normal_form_with_the_same_tensor() {
    let d = parse_term("(z(0,2);(w(1,1)*id)) * w(0,1)").unwrap();
    let mut nf = ptr::null_mut();
    assert_eq!(unsafe { zw_normalize(d, 0, &mut nf) }, ZwStatus::Ok);
    let mut yes = false;
    assert_eq!(unsafe { zw_is_normal_form(nf, &mut yes) }, ZwStatus::Ok);
    assert!(yes);
    assert_eq!(unsafe { zw_is_normal_form(d, &mut yes) }, ZwStatus::Ok);
    assert!(!yes);
    assert_eq!(eval(nf, 0), eval(d, 0));

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { zw_normal_form_json(d, 0, &mut s) }, ZwStatus::Ok);
    let file = take(s);
    let expect = zw_core::normal_form::nf_of_tensor(
        &zw_core::eval(
            &zw_core::diagram::from_term(&zw_core::diagram::parse_term("(z(0,2);(w(1,1)*id)) * w(0,1)").unwrap())
                .unwrap(),
            zw_core::Ring::Integers,
        )
        .unwrap(),
        zw_core::Ring::Integers,
    );
    assert_eq!(file.trim(), expect.to_json().trim());

    assert_eq!(unsafe { zw_render_dot(nf, &mut s) }, ZwStatus::Ok);
    assert!(take(s).starts_with("graph zw {"));
    unsafe {
        zw_diagram_free(nf);
        zw_diagram_free(d);
    }
}

#[test]
fn rule_catalog_is_sound() {
    let mut failed = usize::MAX;
    assert_eq!(unsafe { zw_verify_rules(3, 0, &mut failed) }, ZwStatus::Ok);
    assert_eq!(failed, 0);
    assert_eq!(unsafe { zw_verify_rules(2, 3, &mut failed) }, ZwStatus::Ok);
    assert_eq!(failed, 0);
}

#[test]
fn errors_carry_a_status_and_message() {
    assert_eq!(parse_term("w(0,)").unwrap_err(), ZwStatus::Parse);
    assert!(last_error().contains("column 5"), "{}", last_error());

    let mut d = ptr::null_mut();
    assert_eq!(unsafe { zw_diagram_from_term(ptr::null(), &mut d) }, ZwStatus::NullArgument);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { zw_diagram_from_term(bad.as_ptr().cast(), &mut d) }, ZwStatus::Utf8);
    let junk = CString::new("{\"legs\": 1}").unwrap();
    assert!(matches!(unsafe { zw_diagram_from_json(junk.as_ptr(), &mut d) }, ZwStatus::Parse | ZwStatus::Invalid));

    let g = parse_term("w(0,3)").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { zw_eval(g, 0, 2, &mut s) }, ZwStatus::Resource);
    assert!(s.is_null());
    assert_eq!(unsafe { zw_eval(ptr::null(), 0, 0, &mut s) }, ZwStatus::NullArgument);
    assert_eq!(unsafe { zw_eval(g, 0, 0, ptr::null_mut()) }, ZwStatus::NullArgument);
    assert_eq!(unsafe { zw_diagram_num_legs(ptr::null()) }, 0);
    unsafe {
        zw_diagram_free(g);
        zw_diagram_free(ptr::null_mut());
        zw_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_exports() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/zw.h")).unwrap();
    for name in [
        "zw_last_error",
        "zw_diagram_from_term",
        "zw_diagram_from_json",
        "zw_diagram_free",
        "zw_diagram_to_json",
        "zw_eval",
        "zw_normalize",
        "zw_normal_form_json",
        "zw_render_dot",
        "zw_verify_rules",
        "zw_string_free",
        "typedef struct ZwDiagram ZwDiagram",
        "ZW_STATUS_RESOURCE = 5",
    ] {
        assert!(header.contains(name), "{name} missing from zw.h");
    }
}
