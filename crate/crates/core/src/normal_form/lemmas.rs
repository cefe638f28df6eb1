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

// Operations on normal-form data mirroring the lemmas of the completeness
// proof. They act on terms directly; the tensor contraction in `semantics`
// serves as their oracle in tests.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{NfError, NormalForm, MAX_NF_LEGS};
use crate::diagram::VertexKind;

fn check_leg(nf: &NormalForm, leg: usize) -> Result<(), NfError> {
    if leg < nf.legs {
        Ok(())
    } else {
        Err(NfError::LegOutOfRange { leg, legs: nf.legs })
    }
}

/// Plugging a binary black vertex on leg `j` flips bit `j` of every term.
pub fn negate_end(nf: &NormalForm, j: usize) -> Result<NormalForm, NfError> {
    check_leg(nf, j)?;
    Ok(NormalForm::from_coefficients(nf.legs, nf.coefficients().map(|(b, c)| (b ^ (1 << j), c))))
}

/// Remove bits `j` and `k` from `b`, closing the gap.
fn drop_bits(b: u64, j: usize, k: usize, legs: usize) -> u64 {
    let mut out = 0u64;
    let mut i = 0;
    for l in 0..legs {
        if l != j && l != k {
            out |= ((b >> l) & 1) << i;
            i += 1;
        }
    }
    out
}

/// Plug legs `j` and `k` into each other. Terms whose bits at `j` and `k`
/// differ vanish; the rest lose both bits and coincident terms merge.
pub fn trace_ends(nf: &NormalForm, j: usize, k: usize) -> Result<NormalForm, NfError> {
    check_leg(nf, j)?;
    check_leg(nf, k)?;
    if j == k {
        return Err(NfError::SameLeg(j));
    }
    let legs = nf.legs;
    let items =
        nf.coefficients().filter(|(b, _)| (b >> j) & 1 == (b >> k) & 1).map(|(b, c)| (drop_bits(b, j, k, legs), c));
    Ok(NormalForm::from_coefficients(legs - 2, items))
}

/// Juxtaposing the nullary black vertex gives zero on the same legs.
pub fn absorb_zero(nf: &NormalForm) -> NormalForm {
    NormalForm::zero(nf.legs)
}

fn juxtapose(a: &NormalForm, b: &NormalForm) -> Result<NormalForm, NfError> {
    let legs = a.legs + b.legs;
    if legs > MAX_NF_LEGS {
        return Err(NfError::TooWide(legs));
    }
    let mut items = Vec::with_capacity(a.terms.len() * b.terms.len());
    for (x, c) in a.coefficients() {
        for (y, d) in b.coefficients() {
            items.push((x | (y << a.legs), &c * &d));
        }
    }
    Ok(NormalForm::from_coefficients(legs, items))
}

/// Plug leg `i` of `a` into leg `j` of `b` for each `(i, j)` in `pairing`.
/// The result lists the free legs of `a`, then those of `b`.
pub fn plug_normal_forms(a: &NormalForm, b: &NormalForm, pairing: &[(usize, usize)]) -> Result<NormalForm, NfError> {
    let mut used_a = vec![false; a.legs];
    let mut used_b = vec![false; b.legs];
    for &(i, j) in pairing {
        check_leg(a, i)?;
        check_leg(b, j)?;
        if std::mem::replace(&mut used_a[i], true) {
            return Err(NfError::PairingReuse(i));
        }
        if std::mem::replace(&mut used_b[j], true) {
            return Err(NfError::PairingReuse(j));
        }
    }
    if pairing.is_empty() {
        return juxtapose(a, b);
    }
    let free = a.legs + b.legs - 2 * pairing.len();
    // An end wired to every white vertex meeting one wired to none, or a
    // zero factor, leaves nothing to sum.
    let all = |nf: &NormalForm, l: usize| nf.terms.iter().all(|t| (t.b >> l) & 1 == 1);
    let none = |nf: &NormalForm, l: usize| nf.terms.iter().all(|t| (t.b >> l) & 1 == 0);
    let disconnected = pairing.iter().any(|&(i, j)| (all(a, i) && none(b, j)) || (none(a, i) && all(b, j)));
    if a.is_zero() || b.is_zero() || disconnected {
        return Ok(absorb_zero(&NormalForm::zero(free)));
    }
    // single-end plugging, then traces; `pos[l]` is the current index of
    // juxtaposed leg `l`
    let mut acc = juxtapose(a, b)?;
    let mut pos: Vec<usize> = (0..a.legs + b.legs).collect();
    for &(i, j) in pairing {
        let (x, y) = (pos[i], pos[a.legs + j]);
        acc = trace_ends(&acc, x, y)?;
        let (lo, hi) = (x.min(y), x.max(y));
        for p in pos.iter_mut() {
            if *p > hi {
                *p -= 2;
            } else if *p > lo {
                *p -= 1;
            }
        }
    }
    Ok(acc)
}

/// Normal form of a single generator, legs in port order.
pub fn generator_nf(kind: VertexKind) -> NormalForm {
    let one = || BigInt::one();
    match kind {
        VertexKind::Black(n) => NormalForm::from_coefficients(n, (0..n).map(|i| (1u64 << i, one()))),
        VertexKind::White(0) => NormalForm::zero(0),
        VertexKind::White(n) => {
            let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            NormalForm::from_coefficients(n, [(0, one()), (all, -one())])
        }
        VertexKind::Crossing(s) => {
            let [a, b] = s.pairs();
            let items = (0..4u64).map(|v| {
                let (x, y) = (v & 1, v >> 1);
                let bits = (x << a[0]) | (x << a[1]) | (y << b[0]) | (y << b[1]);
                (bits, if x & y == 1 { -one() } else { one() })
            });
            NormalForm::from_coefficients(4, items)
        }
    }
}

/// Normal form of the bare wire read as a two-leg state.
pub fn cup_nf() -> NormalForm {
    NormalForm::from_coefficients(2, [(0b00, BigInt::one()), (0b11, BigInt::one())])
}

/// Least positive residues mod `n`, all with `p = 0`.
pub fn reduce_mod(nf: &NormalForm, n: u64) -> Result<NormalForm, NfError> {
    if n < 1 {
        return Err(NfError::BadModulus);
    }
    let n = BigInt::from(n);
    let items = nf.coefficients().map(|(b, c)| {
        let r = num_integer::Integer::mod_floor(&c, &n);
        (b, r)
    });
    let out = NormalForm::from_coefficients(nf.legs, items);
    debug_assert!(out.terms.iter().all(|t| !t.p && !t.m.is_zero()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Strands;
    use crate::normal_form::nf_of_tensor;
    use crate::semantics::{generator_tensor, Ring, Tensor};

    fn nf(legs: usize, items: &[(&str, i64)]) -> NormalForm {
        nf_of_tensor(&Tensor::from_strings(legs, items.iter().map(|(s, c)| (*s, *c))), Ring::Integers)
    }

    #[test]
    fn negation() {
        let a = nf(2, &[("10", 1)]);
        assert_eq!(negate_end(&a, 0).unwrap(), nf(2, &[("00", 1)]));
        assert_eq!(negate_end(&negate_end(&a, 1).unwrap(), 1).unwrap(), a);
        assert_eq!(negate_end(&NormalForm::zero(2), 1).unwrap(), NormalForm::zero(2));
        assert!(negate_end(&a, 2).is_err());
    }

    #[test]
    fn trace() {
        assert_eq!(trace_ends(&cup_nf(), 0, 1).unwrap(), NormalForm::scalar(2));
        assert!(trace_ends(&nf(2, &[("01", 1)]), 0, 1).unwrap().is_zero());
        assert_eq!(trace_ends(&cup_nf(), 1, 1), Err(NfError::SameLeg(1)));
    }

    #[test]
    fn absorption() {
        let a = nf(2, &[("01", 3)]);
        assert_eq!(absorb_zero(&a), NormalForm::zero(2));
        assert_eq!(absorb_zero(&NormalForm::zero(2)), NormalForm::zero(2));
    }

    #[test]
    fn plugging() {
        let zero = nf(1, &[("0", 1)]);
        let one = nf(1, &[("1", 1)]);
        assert_eq!(plug_normal_forms(&zero, &one, &[]).unwrap(), nf(2, &[("01", 1)]));
        let not = generator_nf(VertexKind::Black(2));
        assert_eq!(plug_normal_forms(&not, &not, &[(1, 0)]).unwrap(), cup_nf());
        assert!(plug_normal_forms(&not, &not, &[(1, 0), (1, 1)]).is_err());
    }

    #[test]
    fn generators_match_their_tensors() {
        for k in [
            VertexKind::Black(0),
            VertexKind::Black(3),
            VertexKind::White(0),
            VertexKind::White(1),
            VertexKind::White(4),
            VertexKind::Crossing(Strands::standard()),
            VertexKind::Crossing(Strands::new([0, 1], [2, 3])),
        ] {
            assert_eq!(generator_nf(k), nf_of_tensor(&generator_tensor(k, Ring::Integers), Ring::Integers), "{k}");
        }
        let x = generator_nf(VertexKind::Crossing(Strands::standard()));
        assert_eq!(x.terms().len(), 4);
        assert_eq!(x.terms().iter().filter(|t| t.p).count(), 1);
        assert_eq!(generator_nf(VertexKind::Black(3)).terms().len(), 3);
    }

    #[test]
    fn residues() {
        assert!(reduce_mod(&nf(1, &[("0", 2)]), 2).unwrap().is_zero());
        assert_eq!(reduce_mod(&nf(1, &[("1", -1)]), 3).unwrap(), nf(1, &[("1", 2)]));
        let a = nf(3, &[("101", 1)]);
        assert_eq!(reduce_mod(&a, 5).unwrap(), a);
        assert_eq!(reduce_mod(&a, 0), Err(NfError::BadModulus));
    }
}
