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

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::Ring;

/// Largest number of legs a tensor can carry (bitstrings are packed in a
/// `u64`).
pub const MAX_TENSOR_LEGS: usize = 64;

/// Sparse tensor: nonzero coefficients keyed by the bitstring of leg
/// values, bit `i` holding leg `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor {
    legs: usize,
    entries: BTreeMap<u64, BigInt>,
}

impl Tensor {
    pub fn zero(legs: usize) -> Tensor {
        assert!(legs <= MAX_TENSOR_LEGS, "tensor with {legs} legs");
        Tensor { legs, entries: BTreeMap::new() }
    }

    pub fn scalar(c: impl Into<BigInt>) -> Tensor {
        let mut t = Tensor::zero(0);
        t.add(0, c.into());
        t
    }

    /// Build from `(bitstring, coefficient)` pairs; bitstrings use `'0'`
    /// and `'1'` with leg 0 first. Repeated strings are summed.
    pub fn from_strings<'a, I, C>(legs: usize, items: I) -> Tensor
    where
        I: IntoIterator<Item = (&'a str, C)>,
        C: Into<BigInt>,
    {
        let mut t = Tensor::zero(legs);
        for (s, c) in items {
            let bits = parse_bits(s).expect("bitstring of 0s and 1s");
            assert_eq!(s.len(), legs, "bitstring {s} has the wrong length");
            t.add(bits, c.into());
        }
        t
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, bits: u64) -> BigInt {
        self.entries.get(&bits).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Add `c` to the entry at `bits`, dropping it if it cancels.
    pub fn add(&mut self, bits: u64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        debug_assert!(self.legs == 64 || bits >> self.legs == 0);
        let slot = self.entries.entry(bits).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&bits);
        }
    }

    /// Reduce every coefficient into `ring`, dropping zeros.
    pub fn reduce(&self, ring: Ring) -> Tensor {
        let mut t = Tensor::zero(self.legs);
        for (k, v) in &self.entries {
            t.add(*k, ring.reduce(v.clone()));
        }
        t
    }

    /// Leg `i` of the result is leg `order[i]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Tensor {
        assert_eq!(order.len(), self.legs);
        let mut t = Tensor::zero(self.legs);
        for (k, v) in &self.entries {
            let mut nk = 0u64;
            for (i, &old) in order.iter().enumerate() {
                nk |= ((k >> old) & 1) << i;
            }
            t.entries.insert(nk, v.clone());
        }
        t
    }

    /// Tensor product; legs of `self` first.
    pub fn product(&self, other: &Tensor, ring: Ring) -> Tensor {
        let mut t = Tensor::zero(self.legs + other.legs);
        for (a, x) in &self.entries {
            for (b, y) in &other.entries {
                t.add(a | (b << self.legs), ring.reduce(x * y));
            }
        }
        t
    }

    /// Contract legs `i` and `j` of `self` with each other.
    pub fn trace(&self, i: usize, j: usize, ring: Ring) -> Tensor {
        assert!(i != j && i < self.legs && j < self.legs);
        let keep: Vec<usize> = (0..self.legs).filter(|&l| l != i && l != j).collect();
        let mut t = Tensor::zero(keep.len());
        for (k, v) in &self.entries {
            if (k >> i) & 1 != (k >> j) & 1 {
                continue;
            }
            t.add(select_bits(*k, &keep), v.clone());
        }
        t.reduce(ring)
    }

    /// The text format: one `<bitstring> <coefficient>` line per entry in
    /// lexicographic order of the bitstrings; a scalar uses `-` as its
    /// bitstring; the zero tensor prints nothing.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<(String, &BigInt)> =
            self.entries.iter().map(|(k, v)| (bits_to_string(*k, self.legs), v)).collect();
        lines.sort();
        let mut out = String::new();
        for (s, v) in lines {
            out.push_str(if s.is_empty() { "-" } else { &s });
            out.push(' ');
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }

    /// Parse the text format. The zero tensor has no lines, so its leg count
    /// must come from `legs`; otherwise `legs` is checked when given.
    pub fn from_text(src: &str, legs: Option<usize>) -> Result<Tensor, TensorParseError> {
        let mut width: Option<usize> = legs;
        let mut items = Vec::new();
        for (n, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(bits), Some(coef), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(TensorParseError::Line(n + 1, "expected '<bitstring> <coefficient>'".into()));
            };
            let bits = if bits == "-" { "" } else { bits };
            let w = bits.len();
            if *width.get_or_insert(w) != w {
                return Err(TensorParseError::Line(n + 1, "inconsistent bitstring length".into()));
            }
            if w > MAX_TENSOR_LEGS {
                return Err(TensorParseError::Line(n + 1, "too many legs".into()));
            }
            let key =
                parse_bits(bits).ok_or_else(|| TensorParseError::Line(n + 1, format!("bad bitstring {bits:?}")))?;
            let c: BigInt =
                coef.parse().map_err(|_| TensorParseError::Line(n + 1, format!("bad coefficient {coef:?}")))?;
            items.push((key, c));
        }
        let mut t = Tensor::zero(width.unwrap_or(0));
        for (k, c) in items {
            t.add(k, c);
        }
        Ok(t)
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TensorParseError {
    #[error("line {0}: {1}")]
    Line(usize, String),
}

/// Exact equality: same leg count and the same nonzero entries.
pub fn tensor_equal(a: &Tensor, b: &Tensor) -> bool {
    a == b
}

pub(crate) fn parse_bits(s: &str) -> Option<u64> {
    let mut k = 0u64;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => k |= 1 << i,
            _ => return None,
        }
    }
    Some(k)
}

pub(crate) fn bits_to_string(k: u64, legs: usize) -> String {
    (0..legs).map(|i| if (k >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Pack the bits of `k` at `positions` into a contiguous word.
pub(crate) fn select_bits(k: u64, positions: &[usize]) -> u64 {
    positions.iter().enumerate().fold(0u64, |acc, (i, &p)| acc | (((k >> p) & 1) << i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_is_exact() {
        let t = Tensor::from_strings(2, [("00", 2), ("11", -1)]);
        assert!(tensor_equal(&t, &t.clone()));
        assert!(!tensor_equal(&Tensor::scalar(2), &Tensor::scalar(-2)));
        assert!(!tensor_equal(&Tensor::zero(2), &Tensor::zero(0)));
    }

    #[test]
    fn text_format_sorts_lexicographically() {
        // leg 0 is the first character
        let t = Tensor::from_strings(3, [("001", 1), ("100", 1), ("010", -3)]);
        assert_eq!(t.to_text(), "001 1\n010 -3\n100 1\n");
        assert_eq!(Tensor::from_text(&t.to_text(), None).unwrap(), t);
        assert_eq!(Tensor::scalar(2).to_text(), "- 2\n");
        assert_eq!(Tensor::zero(3).to_text(), "");
        assert_eq!(Tensor::from_text("", Some(3)).unwrap(), Tensor::zero(3));
    }

    #[test]
    fn cancelling_entries_vanish() {
        let t = Tensor::from_strings(1, [("1", 1), ("1", -1)]);
        assert!(t.is_zero());
    }

    #[test]
    fn trace_of_metric_is_two() {
        let cup = Tensor::from_strings(2, [("00", 1), ("11", 1)]);
        assert_eq!(cup.trace(0, 1, Ring::Integers), Tensor::scalar(2));
        assert_eq!(cup.trace(0, 1, Ring::Mod(2)), Tensor::zero(0));
    }
}
