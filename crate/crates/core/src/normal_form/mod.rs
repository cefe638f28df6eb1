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

//! Normal forms: every tensor is uniquely a sum `Σ (−1)^p m |b>` over
//! distinct bitstrings `b`, and every diagram rewrites to a fixed template
//! built from that data.

mod lemmas;
mod normalize;
mod template;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::semantics::{Ring, Tensor};

pub use lemmas::{absorb_zero, cup_nf, generator_nf, negate_end, plug_normal_forms, reduce_mod, trace_ends};
pub use normalize::{
    eliminate_crossings, normalize, normalize_to_nf, normalize_with, NormalizeError, RewriteTrace, TraceStep,
};
pub use template::{deloop, is_normal_form, nf_to_diagram};

/// Largest leg count a normal form can carry.
pub const MAX_NF_LEGS: usize = 64;

/// One summand `(−1)^p m |b>`; bit `j` of `b` is leg `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfTerm {
    pub p: bool,
    pub m: BigUint,
    pub b: u64,
}

impl NfTerm {
    pub fn coefficient(&self) -> BigInt {
        let c = BigInt::from(self.m.clone());
        if self.p {
            -c
        } else {
            c
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    legs: usize,
    terms: Vec<NfTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NfError {
    #[error("leg {leg} out of range for a normal form with {legs} legs")]
    LegOutOfRange { leg: usize, legs: usize },
    #[error("cannot trace leg {0} with itself")]
    SameLeg(usize),
    #[error("invalid pairing: leg {0} used twice")]
    PairingReuse(usize),
    #[error("modulus must be at least 1")]
    BadModulus,
    #[error("normal form would need {0} legs (limit {MAX_NF_LEGS})")]
    TooWide(usize),
    #[error("malformed normal form file: {0}")]
    Format(String),
}

/// Canonical order: bitstrings compared as text with leg 0 first, then
/// the sign bit.
fn term_order(legs: usize, a: &NfTerm, b: &NfTerm) -> Ordering {
    let key = |t: &NfTerm| (0..legs).map(|j| (t.b >> j) & 1).collect::<Vec<_>>();
    key(a).cmp(&key(b)).then(a.p.cmp(&b.p))
}

impl NormalForm {
    /// The zero normal form on `legs` legs.
    pub fn zero(legs: usize) -> NormalForm {
        NormalForm { legs, terms: Vec::new() }
    }

    /// The scalar `c`.
    pub fn scalar(c: impl Into<BigInt>) -> NormalForm {
        NormalForm::from_coefficients(0, [(0, c.into())])
    }

    /// Sum coefficients per bitstring, drop zeros and sort.
    pub fn from_coefficients(legs: usize, items: impl IntoIterator<Item = (u64, BigInt)>) -> NormalForm {
        assert!(legs <= MAX_NF_LEGS);
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (b, c) in items {
            *acc.entry(b).or_insert_with(BigInt::zero) += c;
        }
        let mut terms: Vec<NfTerm> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(b, c)| NfTerm { p: c.sign() == Sign::Minus, m: c.magnitude().clone(), b })
            .collect();
        terms.sort_by(|x, y| term_order(legs, x, y));
        NormalForm { legs, terms }
    }

    /// Build from explicit terms, checking the invariants.
    pub fn from_terms(legs: usize, terms: Vec<NfTerm>) -> Result<NormalForm, NfError> {
        if legs > MAX_NF_LEGS {
            return Err(NfError::TooWide(legs));
        }
        let mut seen = std::collections::HashSet::new();
        for t in &terms {
            if t.m.is_zero() {
                return Err(NfError::Format("m must be positive".into()));
            }
            if legs < 64 && t.b >> legs != 0 {
                return Err(NfError::Format("bitstring longer than the leg count".into()));
            }
            if !seen.insert(t.b) {
                return Err(NfError::Format("repeated bitstring".into()));
            }
        }
        let mut terms = terms;
        terms.sort_by(|x, y| term_order(legs, x, y));
        Ok(NormalForm { legs, terms })
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn terms(&self) -> &[NfTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn coefficients(&self) -> impl Iterator<Item = (u64, BigInt)> + '_ {
        self.terms.iter().map(|t| (t.b, t.coefficient()))
    }

    /// The tensor `Σ (−1)^p m |b>`.
    pub fn to_tensor(&self) -> Tensor {
        let mut t = Tensor::zero(self.legs);
        for (b, c) in self.coefficients() {
            t.add(b, c);
        }
        t
    }

    /// Leg `i` of the result is leg `order[i]` of `self`.
    pub fn permute(&self, order: &[usize]) -> NormalForm {
        assert_eq!(order.len(), self.legs);
        let items = self.coefficients().map(|(b, c)| {
            let nb = order.iter().enumerate().fold(0u64, |acc, (i, &old)| acc | (((b >> old) & 1) << i));
            (nb, c)
        });
        NormalForm::from_coefficients(self.legs, items)
    }

    /// The normal-form file: `{"legs": n, "terms": [{"p", "m", "b"}]}`.
    pub fn to_json_value(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|t| {
                let m = match u64::try_from(&t.m) {
                    Ok(v) => json!(v),
                    Err(_) => json!(t.m.to_string()),
                };
                json!({"b": bit_string(t.b, self.legs), "m": m, "p": u8::from(t.p)})
            })
            .collect();
        json!({"legs": self.legs, "terms": terms})
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(src: &str) -> Result<NormalForm, NfError> {
        let v: Value = serde_json::from_str(src).map_err(|e| NfError::Format(e.to_string()))?;
        let bad = |s: &str| NfError::Format(s.to_string());
        let legs = v["legs"].as_u64().ok_or_else(|| bad("missing legs"))? as usize;
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let p = match t["p"].as_u64() {
                Some(0) => false,
                Some(1) => true,
                _ => return Err(bad("p must be 0 or 1")),
            };
            let m: BigUint = match &t["m"] {
                Value::Number(n) => n.as_u64().map(BigUint::from).ok_or_else(|| bad("bad m"))?,
                Value::String(s) => s.parse().map_err(|_| bad("bad m"))?,
                _ => return Err(bad("bad m")),
            };
            let s = t["b"].as_str().ok_or_else(|| bad("missing b"))?;
            if s.len() != legs || !s.chars().all(|c| c == '0' || c == '1') {
                return Err(bad("b must be a bitstring of length legs"));
            }
            let b = s.chars().enumerate().fold(0u64, |acc, (i, c)| acc | (u64::from(c == '1') << i));
            terms.push(NfTerm { p, m, b });
        }
        NormalForm::from_terms(legs, terms)
    }
}

fn bit_string(b: u64, legs: usize) -> String {
    (0..legs).map(|j| if (b >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 ({} legs)", self.legs);
        }
        for (i, t) in self.terms.iter().enumerate() {
            let sign = match (i, t.p) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let m = if t.m.is_one() { String::new() } else { t.m.to_string() };
            write!(f, "{sign}{m}|{}>", bit_string(t.b, self.legs))?;
        }
        Ok(())
    }
}

/// The unique normal form of `psi`. Over `Z/n` coefficients become least
/// positive residues with `p = 0`.
pub fn nf_of_tensor(psi: &Tensor, ring: Ring) -> NormalForm {
    NormalForm::from_coefficients(psi.legs(), psi.entries().map(|(b, c)| (b, ring.reduce(c.clone()))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(legs: usize, items: &[(&str, i64)]) -> NormalForm {
        nf_of_tensor(&Tensor::from_strings(legs, items.iter().map(|(s, c)| (*s, *c))), Ring::Integers)
    }

    #[test]
    fn decomposition_is_sign_magnitude() {
        let a = nf(2, &[("11", 1)]);
        assert_eq!(a.terms(), &[NfTerm { p: false, m: 1u8.into(), b: 0b11 }]);
        let b = nf(2, &[("00", 2), ("11", -1)]);
        assert_eq!(b.to_string(), "2|00> - |11>");
        let z = nf(3, &[]);
        assert_eq!((z.legs(), z.terms().len()), (3, 0));
    }

    #[test]
    fn canonical_order_is_textual() {
        // "01" < "10" although 0b10 < 0b01 as integers with leg 0 first
        let a = nf(2, &[("10", 1), ("01", 1)]);
        assert_eq!(a.to_string(), "|01> + |10>");
    }

    #[test]
    fn mod_ring_uses_least_residues() {
        let t = Tensor::from_strings(1, [("1", -1), ("0", 4)]);
        let a = nf_of_tensor(&t, Ring::Mod(3));
        assert_eq!(a.to_string(), "|0> + 2|1>");
    }

    #[test]
    fn json_round_trip() {
        let a = nf(3, &[("001", -5), ("110", 2)]);
        let text = a.to_json();
        assert_eq!(text, r#"{"legs":3,"terms":[{"b":"001","m":5,"p":1},{"b":"110","m":2,"p":0}]}"#);
        assert_eq!(NormalForm::from_json(&text).unwrap(), a);
        assert!(NormalForm::from_json(r#"{"legs":1,"terms":[{"b":"1","m":1,"p":0},{"b":"1","m":2,"p":0}]}"#).is_err());
    }
}
