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

//! Regenerates the fixed rule files under `rules/` from their terms.
//!
//!     cargo run -p zw-core --example gen_rules
//!
//! Abbreviations used below: `M` is the black multiplication
//! `w(2,1);w(1,1)`, `D` its comultiplication `w(1,1);w(1,2)`, `U` the unit
//! `w(0,1);w(1,1)` and `E` the counit `w(1,1);w(1,0)`.

use std::fs;
use std::path::Path;

use serde_json::json;
use zw_core::diagram::{from_term, json::to_value, parse_term, Diagram};

const M: &str = "(w(2,1);w(1,1))";
const D: &str = "(w(1,1);w(1,2))";
const U: &str = "(w(0,1);w(1,1))";
const E: &str = "(w(1,1);w(1,0))";

/// (name, lhs, rhs, derived); an empty side is the empty diagram.
fn table() -> Vec<(&'static str, String, String, bool)> {
    let s = |t: &str| t.replace('M', M).replace('D', D).replace('U', U).replace('E', E);
    vec![
        // black and white vertices are symmetric; the crossing is too
        ("0a", "w(2,1)".into(), "swap;w(2,1)".into(), false),
        ("0b", "z(2,1)".into(), "swap;z(2,1)".into(), false),
        ("0c", "x".into(), "swap;x;swap".into(), false),
        // monoids
        ("1a", s("(M*id);M"), s("(id*M);M"), false),
        ("1b", s("(U*id);M"), "id".into(), false),
        ("1c", "(z(2,1)*id);z(2,1)".into(), "(id*z(2,1));z(2,1)".into(), false),
        ("1d", "(z(0,1)*id);z(2,1)".into(), "id".into(), false),
        // involutions
        ("2a", "w(1,1);w(1,1)".into(), "id".into(), false),
        ("2b", "z(1,1);z(1,1)".into(), "id".into(), false),
        // automorphisms
        ("3a", "(w(1,1)*w(1,1));z(2,1);z(1,1)".into(), "z(2,1);z(1,1);w(1,1)".into(), false),
        ("3b", "(z(1,1)*z(1,1));w(2,1);w(1,1)".into(), "w(2,1);w(1,1);z(1,1)".into(), false),
        // Frobenius
        ("4", "(id*z(1,2));(z(2,1)*id)".into(), "z(2,1);z(1,2)".into(), false),
        // Hopf algebra with the crossing
        ("5a", s("M;D"), s("(D*D);(id*x*id);(M*M)"), false),
        ("5b", s("U;D"), s("U*U"), false),
        ("5c", s("U;E"), String::new(), false),
        ("5d", s("D;(z(1,1)*id);M"), s("E;U"), false),
        // Hopf algebra with the white comultiplication
        ("6a", s("M;z(1,2)"), s("(z(1,2)*z(1,2));(id*x*id);(M*M)"), false),
        ("6b", s("U;z(1,2)"), s("U*U"), false),
        ("6c", s("z(1,2);M"), s("E;U"), false),
        // grading
        ("7a", s("(M*id);x"), s("(id*x);(x*id);(id*M)"), false),
        ("7b", "x;(w(1,1)*id)".into(), "(z(1,1)*w(1,1));x".into(), false),
        // crossing elimination
        ("X", "w(1,2);(z(1,2)*z(1,2));(id*x*id)".into(), "w(1,2);(z(1,2)*z(1,2));(id*swap*id)".into(), false),
        // derived
        ("phase", "z(1,1);z(1,2)".into(), "z(1,2);(z(1,1)*id)".into(), true),
        ("ba-braiding", s("M;z(1,2)"), s("(z(1,2)*z(1,2));(id*swap*id);(M*M)"), true),
    ]
}

fn side(src: &str) -> Diagram {
    if src.is_empty() {
        return Diagram::empty();
    }
    let t = parse_term(src).unwrap_or_else(|e| panic!("{src}: {e}"));
    from_term(&t).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("rules");
    fs::create_dir_all(&dir).expect("create rules/");
    for (name, lhs, rhs, derived) in table() {
        let (l, r) = (side(&lhs), side(&rhs));
        assert_eq!(l.boundary(), r.boundary(), "rule {name}: boundary types differ");
        let doc = json!({
            "name": name,
            "lhs": to_value(&l),
            "rhs": to_value(&r),
            "boundaryMap": (0..l.num_legs()).collect::<Vec<_>>(),
            "params": [],
            "derived": derived,
        });
        let text = serde_json::to_string_pretty(&doc).expect("serialize") + "\n";
        fs::write(dir.join(format!("{name}.json")), text).expect("write rule file");
        println!("{name}");
    }
}
