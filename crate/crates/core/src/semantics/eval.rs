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

use std::collections::HashMap;

use num_bigint::BigInt;
use thiserror::Error;

use super::tensor::{select_bits, MAX_TENSOR_LEGS};
use super::{Ring, Tensor};
use crate::diagram::{Diagram, Port, ValidationReport, VertexKind};

/// Default bound on the number of boundary legs [`eval`] accepts.
pub const DEFAULT_LEG_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("diagram has {legs} boundary legs, above the cap of {cap}")]
    LegCap { legs: usize, cap: usize },
    #[error("an intermediate tensor would need {0} legs (limit {MAX_TENSOR_LEGS})")]
    TooWide(usize),
    #[error("invalid diagram: {0}")]
    Invalid(ValidationReport),
}

/// Order in which the tensor network is contracted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Repeatedly contract the connected pair leaving the fewest open legs.
    #[default]
    Greedy,
    /// Fold the vertices in index order.
    Sequential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub leg_cap: usize,
    pub strategy: Strategy,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { leg_cap: DEFAULT_LEG_CAP, strategy: Strategy::Greedy }
    }
}

/// The tensor of a single generator, legs in port order.
pub fn generator_tensor(kind: VertexKind, ring: Ring) -> Tensor {
    let mut t = Tensor::zero(kind.arity());
    match kind {
        VertexKind::Black(n) => {
            for i in 0..n {
                t.add(1 << i, ring.one());
            }
        }
        VertexKind::White(n) => {
            let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            t.add(0, ring.one());
            t.add(all, ring.minus_one());
        }
        VertexKind::Crossing(s) => {
            let [a, b] = s.pairs();
            for x in 0..2u64 {
                for y in 0..2u64 {
                    let bits = (x << a[0]) | (x << a[1]) | (y << b[0]) | (y << b[1]);
                    let c = if x & y == 1 { ring.minus_one() } else { ring.one() };
                    t.add(bits, c);
                }
            }
        }
    }
    t.reduce(ring)
}

/// Contract leg `i` of `a` with leg `j` of `b` for every `(i, j)` in
/// `pairing`. The result lists the free legs of `a`, then those of `b`.
pub fn contract(a: &Tensor, b: &Tensor, pairing: &[(usize, usize)], ring: Ring) -> Tensor {
    // Label legs so that paired legs share a label.
    let mut la: Vec<usize> = (0..a.legs()).collect();
    let mut lb: Vec<usize> = (a.legs()..a.legs() + b.legs()).collect();
    for &(i, j) in pairing {
        lb[j] = la[i];
    }
    let x = Node { t: a.clone(), labels: std::mem::take(&mut la) };
    let y = Node { t: b.clone(), labels: std::mem::take(&mut lb) };
    contract_nodes(&x, &y, ring).expect("contraction result fits").t
}

pub fn eval(g: &Diagram, ring: Ring) -> Result<Tensor, EvalError> {
    eval_with(g, ring, EvalOptions::default())
}

/// Interpret `g` as a tensor. Boundary port `k` becomes leg `k`.
pub fn eval_with(g: &Diagram, ring: Ring, opts: EvalOptions) -> Result<Tensor, EvalError> {
    let legs = g.num_legs();
    if legs > opts.leg_cap {
        return Err(EvalError::LegCap { legs, cap: opts.leg_cap });
    }
    let report = g.validate();
    if !report.is_empty() {
        return Err(EvalError::Invalid(report));
    }

    let mut labels: Vec<Vec<usize>> = g.vertices().iter().map(|k| vec![usize::MAX; k.arity()]).collect();
    let mut bare = Vec::new();
    let mut open = vec![usize::MAX; legs];
    let mut next = 0;
    for &(a, b) in g.edges() {
        match (a, b) {
            (Port::Boundary(i), Port::Boundary(j)) => {
                bare.push(Node {
                    t: Tensor::from_strings(2, [("00", 1), ("11", 1)]).reduce(ring),
                    labels: vec![next, next + 1],
                });
                open[i] = next;
                open[j] = next + 1;
                next += 2;
            }
            _ => {
                for p in [a, b] {
                    match p {
                        Port::Vertex { vertex, port } => labels[vertex][port] = next,
                        Port::Boundary(k) => open[k] = next,
                    }
                }
                next += 1;
            }
        }
    }
    let mut nodes = vertex_nodes(g.vertices(), labels, &mut next, ring);
    nodes.append(&mut bare);

    let factor = ring.reduce(BigInt::from(2u8).pow(g.loops() as u32));
    let mut scalar = Node { t: Tensor::scalar(factor), labels: vec![] };
    if scalar.t.is_zero() || nodes.iter().any(|n| n.t.is_zero()) {
        return Ok(Tensor::zero(legs));
    }
    for n in &mut nodes {
        n.self_trace(ring);
    }

    match opts.strategy {
        Strategy::Greedy => {
            while let Some((i, j)) = best_pair(&nodes) {
                let merged = contract_nodes(&nodes[i], &nodes[j], ring)?;
                nodes.swap_remove(j);
                nodes[i] = merged;
            }
        }
        Strategy::Sequential => {
            let mut acc = Node { t: Tensor::scalar(ring.one()), labels: vec![] };
            for n in &nodes {
                acc = contract_nodes(&acc, n, ring)?;
            }
            nodes = vec![acc];
        }
    }
    for n in &nodes {
        scalar = contract_nodes(&scalar, n, ring)?;
    }

    let order: Vec<usize> =
        open.iter().map(|l| scalar.labels.iter().position(|x| x == l).expect("open label survives")).collect();
    Ok(scalar.t.permute(&order).reduce(ring))
}

struct Node {
    t: Tensor,
    labels: Vec<usize>,
}

impl Node {
    fn self_trace(&mut self, ring: Ring) {
        loop {
            let dup = (0..self.labels.len())
                .find_map(|i| (i + 1..self.labels.len()).find(|&j| self.labels[j] == self.labels[i]).map(|j| (i, j)));
            let Some((i, j)) = dup else { return };
            self.t = self.t.trace(i, j, ring);
            self.labels.remove(j);
            self.labels.remove(i);
        }
    }
}

/// The connected pair whose contraction leaves the fewest open legs, ties
/// broken by the smallest indices.
fn best_pair(nodes: &[Node]) -> Option<(usize, usize)> {
    let mut holder: HashMap<usize, usize> = HashMap::new();
    let mut shared: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        for &l in &n.labels {
            match holder.insert(l, i) {
                Some(j) if j != i => *shared.entry((j.min(i), j.max(i))).or_default() += 1,
                _ => {}
            }
        }
    }
    shared
        .into_iter()
        .map(|((i, j), s)| (nodes[i].labels.len() + nodes[j].labels.len() - 2 * s, i, j))
        .min()
        .map(|(_, i, j)| (i, j))
}

/// One node per vertex, except that a spider wider than three legs becomes
/// a chain of ternary spiders joined through a binary connector of the same
/// colour (NOT for black, White2 for white). Both fusions hold exactly, and
/// the chain lets the contraction order stay narrow around wide spiders.
fn vertex_nodes(kinds: &[VertexKind], labels: Vec<Vec<usize>>, next: &mut usize, ring: Ring) -> Vec<Node> {
    let mut out = Vec::with_capacity(kinds.len());
    for (&kind, mut labels) in kinds.iter().zip(labels) {
        let make: fn(usize) -> VertexKind = match kind {
            VertexKind::Black(_) => VertexKind::Black,
            VertexKind::White(_) => VertexKind::White,
            VertexKind::Crossing(_) => {
                out.push(Node { t: generator_tensor(kind, ring), labels });
                continue;
            }
        };
        while labels.len() > 3 {
            let (a, b) = (*next, *next + 1);
            *next += 2;
            out.push(Node { t: generator_tensor(make(3), ring), labels: vec![labels[0], labels[1], a] });
            out.push(Node { t: generator_tensor(make(2), ring), labels: vec![a, b] });
            labels.splice(0..2, [b]);
        }
        out.push(Node { t: generator_tensor(make(labels.len()), ring), labels });
    }
    out
}

/// Sum over every label the two nodes share.
fn contract_nodes(a: &Node, b: &Node, ring: Ring) -> Result<Node, EvalError> {
    let mut sa = Vec::new();
    let mut sb = Vec::new();
    for (i, l) in a.labels.iter().enumerate() {
        if let Some(j) = b.labels.iter().position(|m| m == l) {
            sa.push(i);
            sb.push(j);
        }
    }
    let ra: Vec<usize> = (0..a.labels.len()).filter(|i| !sa.contains(i)).collect();
    let rb: Vec<usize> = (0..b.labels.len()).filter(|j| !sb.contains(j)).collect();
    let width = ra.len() + rb.len();
    if width > MAX_TENSOR_LEGS {
        return Err(EvalError::TooWide(width));
    }
    let mut by_key: HashMap<u64, Vec<(u64, &BigInt)>> = HashMap::new();
    for (k, v) in b.t.entries() {
        by_key.entry(select_bits(k, &sb)).or_default().push((select_bits(k, &rb), v));
    }
    let mut t = Tensor::zero(width);
    for (k, v) in a.t.entries() {
        if let Some(matches) = by_key.get(&select_bits(k, &sa)) {
            let head = select_bits(k, &ra);
            for (tail, w) in matches {
                t.add(head | (tail << ra.len()), v * *w);
            }
        }
    }
    let labels = ra.iter().map(|&i| a.labels[i]).chain(rb.iter().map(|&j| b.labels[j])).collect();
    Ok(Node { t: t.reduce(ring), labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{from_term, parse_term};

    fn ev(src: &str) -> Tensor {
        eval(&from_term(&parse_term(src).unwrap()).unwrap(), Ring::Integers).unwrap()
    }

    #[test]
    fn generators() {
        assert_eq!(ev("w(0,3)"), Tensor::from_strings(3, [("100", 1), ("010", 1), ("001", 1)]));
        assert_eq!(ev("z(1,1)"), Tensor::from_strings(2, [("00", 1), ("11", -1)]));
        assert!(ev("w(0,0)").is_zero());
        assert!(ev("z(0,0)").is_zero());
    }

    #[test]
    fn black_two_is_not() {
        assert_eq!(ev("w(1,1)"), Tensor::from_strings(2, [("01", 1), ("10", 1)]));
    }

    #[test]
    fn circle_is_two() {
        assert_eq!(ev("cup ; cap"), Tensor::scalar(2));
        let g = from_term(&parse_term("cup ; cap").unwrap()).unwrap();
        assert_eq!(eval(&g, Ring::Mod(2)).unwrap(), Tensor::zero(0));
    }

    #[test]
    fn triangle_is_odd_parity() {
        // three Black(3) vertices in a ring, one leg out each
        use crate::diagram::{Dir, Port};
        let g = Diagram::from_parts(
            vec![VertexKind::Black(3); 3],
            vec![Dir::Out; 3],
            vec![
                (Port::vertex(0, 1), Port::vertex(1, 2)),
                (Port::vertex(1, 1), Port::vertex(2, 2)),
                (Port::vertex(2, 1), Port::vertex(0, 2)),
                (Port::Boundary(0), Port::vertex(0, 0)),
                (Port::Boundary(1), Port::vertex(1, 0)),
                (Port::Boundary(2), Port::vertex(2, 0)),
            ],
            0,
        );
        let expect = Tensor::from_strings(3, [("111", 1), ("100", 1), ("010", 1), ("001", 1)]);
        assert_eq!(eval(&g, Ring::Integers).unwrap(), expect);
    }

    #[test]
    fn crossing_and_plain_wire() {
        assert_eq!(ev("x"), Tensor::from_strings(4, [("0000", 1), ("0110", 1), ("1001", 1), ("1111", -1)]));
        assert_eq!(ev("id"), Tensor::from_strings(2, [("00", 1), ("11", 1)]));
    }

    #[test]
    fn leg_cap() {
        let g = from_term(&parse_term("w(0,17)").unwrap()).unwrap();
        assert_eq!(eval(&g, Ring::Integers), Err(EvalError::LegCap { legs: 17, cap: 16 }));
        let opts = EvalOptions { leg_cap: 17, ..Default::default() };
        assert_eq!(eval_with(&g, Ring::Integers, opts).unwrap().len(), 17);
    }

    #[test]
    fn contract_matches_trace() {
        let a = Tensor::from_strings(2, [("01", 3), ("10", 1)]);
        let b = Tensor::from_strings(2, [("00", 1), ("11", -1)]);
        let c = contract(&a, &b, &[(1, 0)], Ring::Integers);
        assert_eq!(c, Tensor::from_strings(2, [("01", -3), ("10", 1)]));
        let via_trace = a.product(&b, Ring::Integers).trace(1, 2, Ring::Integers);
        assert_eq!(c, via_trace);
    }

    #[test]
    fn spiders_wider_than_a_tensor_key() {
        // two spiders joined by 70 parallel wires, one free leg each
        use crate::diagram::{Dir, Port};
        let pair = |kind: VertexKind| {
            let mut edges = vec![(Port::Boundary(0), Port::vertex(0, 0)), (Port::Boundary(1), Port::vertex(1, 0))];
            edges.extend((1..71).map(|p| (Port::vertex(0, p), Port::vertex(1, p))));
            Diagram::from_parts(vec![kind; 2], vec![Dir::Out; 2], edges, 0)
        };
        // black: either the free legs carry the 1, or one of the 70 wires does
        let black = eval(&pair(VertexKind::Black(71)), Ring::Integers).unwrap();
        assert_eq!(black, Tensor::from_strings(2, [("00", 70), ("11", 1)]));
        let white = eval(&pair(VertexKind::White(71)), Ring::Integers).unwrap();
        assert_eq!(white, Tensor::from_strings(2, [("00", 1), ("11", 1)]));
    }
}
