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

// Shared test helpers: random generators and an oracle evaluator that sums
// over every assignment of bits to wires, independent of the contraction
// engine.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use zw_core::diagram::{from_term, parse_term, Term};
use zw_core::fuzz::{random_diagram, stream, FuzzBounds};
use zw_core::normal_form::{NfTerm, NormalForm};
use zw_core::{Diagram, Port, Tensor, VertexKind};

pub fn term(src: &str) -> Diagram {
    from_term(&parse_term(src).unwrap()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    stream(seed, u64::MAX)
}

pub fn diagram(seed: u64, bounds: &FuzzBounds) -> Diagram {
    random_diagram(&mut stream(seed, 0), bounds)
}

pub fn small() -> FuzzBounds {
    FuzzBounds { max_vertices: 5, max_arity: 4, max_legs: 5, crossings: true }
}

/// Generator value straight from the definitions.
fn generator_value(kind: VertexKind, bits: &[u8]) -> i64 {
    let ones = bits.iter().filter(|&&b| b == 1).count();
    match kind {
        VertexKind::Black(_) => i64::from(ones == 1),
        VertexKind::White(0) => 0,
        VertexKind::White(_) if ones == 0 => 1,
        VertexKind::White(n) if ones == n => -1,
        VertexKind::White(_) => 0,
        VertexKind::Crossing(s) => {
            let [a, b] = s.pairs();
            if bits[a[0]] != bits[a[1]] || bits[b[0]] != bits[b[1]] {
                0
            } else if bits[a[0]] == 1 && bits[b[0]] == 1 {
                -1
            } else {
                1
            }
        }
    }
}

/// Sum over all wire assignments. Exponential in the wire count; keep
/// diagrams small.
pub fn brute_eval(g: &Diagram) -> Tensor {
    let edges = g.edges();
    assert!(edges.len() <= 20, "too many wires for the brute-force oracle");
    let mut wire_of: HashMap<Port, usize> = HashMap::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        wire_of.insert(a, i);
        wire_of.insert(b, i);
    }
    let scale = BigInt::from(2u8).pow(g.loops() as u32);
    let mut out = Tensor::zero(g.num_legs());
    for assign in 0u64..(1 << edges.len()) {
        let bit = |p: Port| ((assign >> wire_of[&p]) & 1) as u8;
        let mut c = 1i64;
        for (v, kind) in g.vertices().iter().enumerate() {
            let bits: Vec<u8> = (0..kind.arity()).map(|k| bit(Port::vertex(v, k))).collect();
            c *= generator_value(*kind, &bits);
            if c == 0 {
                break;
            }
        }
        if c == 0 {
            continue;
        }
        let key = (0..g.num_legs()).fold(0u64, |acc, k| acc | (u64::from(bit(Port::Boundary(k))) << k));
        out.add(key, BigInt::from(c) * &scale);
    }
    out
}

/// Random tensor with entries in `[-range, range]`.
pub fn random_tensor(rng: &mut impl Rng, legs: usize, range: i64) -> Tensor {
    let mut t = Tensor::zero(legs);
    for b in 0..(1u64 << legs) {
        if rng.gen_bool(0.5) {
            t.add(b, BigInt::from(rng.gen_range(-range..=range)));
        }
    }
    t
}

/// Random normal form with distinct bitstrings and `m` up to `max_m`.
pub fn random_nf(rng: &mut impl Rng, legs: usize, max_m: u32) -> NormalForm {
    let mut all: Vec<u64> = (0..(1u64 << legs)).collect();
    all.shuffle(rng);
    let k = rng.gen_range(0..=all.len().min(6));
    let terms =
        all[..k].iter().map(|&b| NfTerm { p: rng.gen(), m: BigUint::from(rng.gen_range(1..=max_m)), b }).collect();
    NormalForm::from_terms(legs, terms).unwrap()
}

/// A random well-typed term: a start layer, then layers consuming exactly
/// the wires below them.
pub fn random_term(rng: &mut impl Rng, max_width: usize) -> Term {
    let (mut t, mut width) = start_layer(rng);
    for _ in 0..rng.gen_range(0..4) {
        if width == 0 {
            break;
        }
        let (l, w) = layer(rng, width, max_width);
        t = Term::seq(t, l);
        width = w;
    }
    t
}

fn start_layer(rng: &mut impl Rng) -> (Term, usize) {
    let inputs = rng.gen_range(0..=2usize);
    let mut parts: Vec<Term> = vec![Term::Id; inputs];
    let mut width = inputs;
    match rng.gen_range(0..3) {
        0 => parts.push(Term::Cup),
        1 => parts.push(Term::W(0, rng.gen_range(1..=3))),
        _ => parts.push(Term::Z(0, rng.gen_range(1..=3))),
    }
    width += match parts.last().unwrap() {
        Term::Cup => 2,
        Term::W(_, m) | Term::Z(_, m) => *m,
        _ => unreachable!(),
    };
    (parts.into_iter().reduce(Term::tensor).unwrap(), width)
}

fn layer(rng: &mut impl Rng, inputs: usize, max_width: usize) -> (Term, usize) {
    let mut parts = Vec::new();
    let mut left = inputs;
    let mut out = 0;
    while left > 0 {
        let room = max_width.saturating_sub(out + left);
        let choice = rng.gen_range(0..7);
        let (t, i, o) = match choice {
            1 if left >= 2 => (Term::Swap, 2, 2),
            2 if left >= 2 => (Term::Cap, 2, 0),
            3 if left >= 2 => (Term::Cross, 2, 2),
            4 => {
                let i = rng.gen_range(1..=left.min(2));
                let o = rng.gen_range(0..=(room + i).min(2));
                (Term::W(i, o), i, o)
            }
            5 => {
                let i = rng.gen_range(1..=left.min(2));
                let o = rng.gen_range(0..=(room + i).min(2));
                (Term::Z(i, o), i, o)
            }
            _ => (Term::Id, 1, 1),
        };
        parts.push(t);
        left -= i;
        out += o;
    }
    (parts.into_iter().reduce(Term::tensor).unwrap(), out)
}
