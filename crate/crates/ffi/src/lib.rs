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

//! C interface to `zw-core`.
//!
//! Diagrams are opaque `ZwDiagram` handles owned by the caller and released
//! with `zw_diagram_free`. Every fallible call returns a `ZwStatus`; on
//! failure `zw_last_error` gives a message for the calling thread. Strings
//! returned through `char **` out-parameters are released with
//! `zw_string_free`. Panics never cross the boundary.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zw_core::cli::{parse_diagram, Format, ParseError};
use zw_core::diagram::json::to_json;
use zw_core::normal_form::{is_normal_form, normalize_to_nf, NfError, NormalizeError};
use zw_core::render::render_dot;
use zw_core::rules::{catalog, verify_soundness};
use zw_core::semantics::{eval_with, EvalError, EvalOptions, DEFAULT_LEG_CAP};
use zw_core::{Diagram, Ring};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZwStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// The input did not parse.
    Parse = 3,
    /// The diagram breaks a structural invariant.
    Invalid = 4,
    /// A leg cap or width limit was exceeded.
    Resource = 5,
    /// The modulus was out of range.
    BadModulus = 6,
    /// An internal error; the library state is unaffected.
    Internal = 7,
}

/// Opaque diagram handle.
pub struct ZwDiagram(Diagram);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl ToString) {
    let text = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Fail(ZwStatus, String);

impl From<ParseError> for Fail {
    fn from(e: ParseError) -> Fail {
        let status = match e {
            ParseError::Invalid(_) => ZwStatus::Invalid,
            _ => ZwStatus::Parse,
        };
        Fail(status, e.to_string())
    }
}

impl From<EvalError> for Fail {
    fn from(e: EvalError) -> Fail {
        let status = match e {
            EvalError::Invalid(_) => ZwStatus::Invalid,
            _ => ZwStatus::Resource,
        };
        Fail(status, e.to_string())
    }
}

impl From<NormalizeError> for Fail {
    fn from(e: NormalizeError) -> Fail {
        let status = match e {
            NormalizeError::Invalid(_) => ZwStatus::Invalid,
            NormalizeError::LegCap { .. } | NormalizeError::Resource(NfError::TooWide(_)) => ZwStatus::Resource,
            NormalizeError::Resource(_) => ZwStatus::Internal,
        };
        Fail(status, e.to_string())
    }
}

/// Run `f`, turning failures and panics into a status and error message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ZwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZwStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ZwStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(ZwStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(ZwStatus::Utf8, e.to_string()))
}

unsafe fn diagram_arg<'a>(p: *const ZwDiagram) -> Result<&'a Diagram, Fail> {
    p.as_ref().map(|d| &d.0).ok_or_else(|| Fail(ZwStatus::NullArgument, "null diagram handle".into()))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(ZwStatus::NullArgument, "null output pointer".into()))
}

fn ring(modulus: u64) -> Result<Ring, Fail> {
    match modulus {
        0 => Ok(Ring::Integers),
        n => Ring::modulo(n).map_err(|_| Fail(ZwStatus::BadModulus, "modulus must be at least 1".into())),
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("library output has no interior NUL").into_raw()
}

unsafe fn parse(src: *const c_char, format: Format, out: *mut *mut ZwDiagram) -> ZwStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        let g = parse_diagram(str_arg(src)?, format)?;
        *out = Box::into_raw(Box::new(ZwDiagram(g)));
        Ok(())
    })
}

/// Message of the last failed call on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn zw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a term such as `(cup * id) ; (id * cap)`.
#[no_mangle]
pub unsafe extern "C" fn zw_diagram_from_term(src: *const c_char, out: *mut *mut ZwDiagram) -> ZwStatus {
    parse(src, Format::Term, out)
}

/// Parse the JSON graph format.
#[no_mangle]
pub unsafe extern "C" fn zw_diagram_from_json(src: *const c_char, out: *mut *mut ZwDiagram) -> ZwStatus {
    parse(src, Format::Json, out)
}

/// Release a diagram. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn zw_diagram_free(d: *mut ZwDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Release a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn zw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of boundary legs, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn zw_diagram_num_legs(d: *const ZwDiagram) -> usize {
    d.as_ref().map_or(0, |d| d.0.num_legs())
}

/// Number of vertices, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn zw_diagram_num_vertices(d: *const ZwDiagram) -> usize {
    d.as_ref().map_or(0, |d| d.0.num_vertices())
}

/// Serialize to the JSON graph format.
#[no_mangle]
pub unsafe extern "C" fn zw_diagram_to_json(d: *const ZwDiagram, out: *mut *mut c_char) -> ZwStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        *out = into_c_string(to_json(diagram_arg(d)?));
        Ok(())
    })
}

/// Evaluate to the tensor text format. `modulus` 0 means the integers;
/// `leg_cap` 0 means the default cap.
#[no_mangle]
pub unsafe extern "C" fn zw_eval(d: *const ZwDiagram, modulus: u64, leg_cap: usize, out: *mut *mut c_char) -> ZwStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        let cap = if leg_cap == 0 { DEFAULT_LEG_CAP } else { leg_cap };
        let opts = EvalOptions { leg_cap: cap, ..EvalOptions::default() };
        let t = eval_with(diagram_arg(d)?, ring(modulus)?, opts)?;
        *out = into_c_string(t.to_text());
        Ok(())
    })
}

/// Normalize into a new diagram handle.
#[no_mangle]
pub unsafe extern "C" fn zw_normalize(d: *const ZwDiagram, modulus: u64, out: *mut *mut ZwDiagram) -> ZwStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        let (nf, _) = zw_core::normal_form::normalize(diagram_arg(d)?, ring(modulus)?, false)?;
        *out = Box::into_raw(Box::new(ZwDiagram(nf)));
        Ok(())
    })
}

/// The normal-form file of a diagram's tensor.
#[no_mangle]
pub unsafe extern "C" fn zw_normal_form_json(d: *const ZwDiagram, modulus: u64, out: *mut *mut c_char) -> ZwStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        let nf = normalize_to_nf(diagram_arg(d)?, ring(modulus)?, DEFAULT_LEG_CAP)?;
        *out = into_c_string(nf.to_json());
        Ok(())
    })
}

/// Whether the diagram is a normal-form template.
#[no_mangle]
pub unsafe extern "C" fn zw_is_normal_form(d: *const ZwDiagram, out: *mut bool) -> ZwStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = is_normal_form(diagram_arg(d)?).is_some();
        Ok(())
    })
}

/// Graphviz DOT text.
#[no_mangle]
pub unsafe extern "C" fn zw_render_dot(d: *const ZwDiagram, out: *mut *mut c_char) -> ZwStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        *out = into_c_string(render_dot(diagram_arg(d)?));
        Ok(())
    })
}

/// Check the rule catalog up to `max_arity`; `modulus` 0 means the
/// integers, otherwise `or(modulus)` is included. Stores the number of
/// unsound rules in `failed`.
#[no_mangle]
pub unsafe extern "C" fn zw_verify_rules(max_arity: usize, modulus: u64, failed: *mut usize) -> ZwStatus {
    guard(|| {
        let failed = out_arg(failed)?;
        let r = ring(modulus)?;
        let m = (modulus != 0).then_some(modulus);
        let rules = catalog(max_arity, m).map_err(|e| Fail(ZwStatus::Invalid, e.to_string()))?;
        let mut bad = 0;
        for rule in &rules {
            let rr = if rule.modulus.is_some() { rule.native_ring() } else { r };
            bad += usize::from(!verify_soundness(rule, rr)?);
        }
        *failed = bad;
        Ok(())
    })
}
