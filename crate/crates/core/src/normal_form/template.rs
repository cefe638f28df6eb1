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

//! The normal-form template.
//!
//! ```text
//!   leg 0        leg 1              one binary black "negator" per leg
//!     |            |
//!   top 0        top 1              black, one port per wired term + 1
//!    |   \      /  |
//!   white 0   white 1   ...         white per term, wired to top j iff b_j
//!     |          |
//!   [sign]     [sign]               binary white iff p = 1
//!     |          |
//!   [gadget]   [gadget]             multiplies by m when m >= 2
//!      \        /
//!        bottom                     black of arity q
//!
//!   black(1) -- white(1)            global factor -1, present when q >= 1
//! ```
//!
//! The bottom selects one term. Its white copies a 1 to the tops it is
//! wired to, at the price of a factor −1 that the global scalar cancels, and
//! each top then emits the complement of what it receives, which the negator
//! flips back. The gadget is two black vertices of arity `m + 1` joined by
//! `m` parallel wires and capped by negators, with matrix `diag(1, m)`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::One;

use super::{NfTerm, NormalForm};
use crate::diagram::{Diagram, DiagramBuilder, Port, VertexKind};

const NOT: VertexKind = VertexKind::Black(2);
const SIGN: VertexKind = VertexKind::White(2);

/// One white vertex of the template: sign, gadget multiplicity, bits.
struct Unit {
    p: bool,
    m: BigUint,
    b: u64,
}

fn build(legs: usize, units: &[Unit]) -> Diagram {
    let q = units.len();
    let mut g = DiagramBuilder::new(legs);
    let bottom = g.black(q);

    // vertices first, in template order; wiring afterwards in (term, leg)
    // order
    struct Chain {
        gadget: Option<[usize; 4]>,
        sign: Option<usize>,
        white: usize,
        m: usize,
    }
    let mut chains = Vec::with_capacity(q);
    for u in units {
        let m = usize::try_from(&u.m).expect("multiplicity fits in memory");
        let gadget = (m >= 2).then(|| [g.add(NOT), g.black(m + 1), g.black(m + 1), g.add(NOT)]);
        let sign = u.p.then(|| g.add(SIGN));
        let white = g.white(1 + u.b.count_ones() as usize);
        chains.push(Chain { gadget, sign, white, m });
    }
    let wired = |j: usize| units.iter().filter(|u| (u.b >> j) & 1 == 1).count();
    let mut tops = Vec::with_capacity(legs);
    let mut negators = Vec::with_capacity(legs);
    for j in 0..legs {
        tops.push(g.black(1 + wired(j)));
        negators.push(g.add(NOT));
    }
    let scalar = (q >= 1).then(|| (g.black(1), g.white(1)));

    for c in &chains {
        let mut end = bottom;
        if let Some([n1, a, b, n2]) = c.gadget {
            g.connect(end, n1);
            g.connect(n1, a);
            for _ in 0..c.m {
                g.connect(a, b);
            }
            g.connect(b, n2);
            end = n2;
        }
        if let Some(s) = c.sign {
            g.connect(end, s);
            end = s;
        }
        g.connect(end, c.white);
    }
    for (u, c) in units.iter().zip(&chains) {
        for (j, &top) in tops.iter().enumerate() {
            if (u.b >> j) & 1 == 1 {
                g.connect(c.white, top);
            }
        }
    }
    for j in 0..legs {
        g.connect(tops[j], negators[j]);
        g.leg(negators[j], j);
    }
    if let Some((b, w)) = scalar {
        g.connect(b, w);
    }
    g.build()
}

/// The template diagram of `nf`.
pub fn nf_to_diagram(nf: &NormalForm) -> Diagram {
    let units: Vec<Unit> = nf.terms().iter().map(|t| Unit { p: t.p, m: t.m.clone(), b: t.b }).collect();
    build(nf.legs(), &units)
}

/// Loop-free pre-normal form: each term of multiplicity `m` is spelled out
/// as `m` white vertices with the same wiring.
pub fn deloop(nf: &NormalForm) -> Diagram {
    let mut units = Vec::new();
    for t in nf.terms() {
        let m = usize::try_from(&t.m).expect("multiplicity fits in memory");
        for _ in 0..m {
            units.push(Unit { p: t.p, m: BigUint::one(), b: t.b });
        }
    }
    build(nf.legs(), &units)
}

struct View<'a> {
    g: &'a Diagram,
    partner: HashMap<Port, Port>,
}

impl View<'_> {
    fn kind(&self, v: usize) -> VertexKind {
        self.g.vertex(v)
    }

    /// Far ends of the ports of `v`, one entry per port.
    fn neighbours(&self, v: usize) -> Vec<Port> {
        (0..self.kind(v).arity()).map(|p| self.partner[&Port::vertex(v, p)]).collect()
    }

    fn vertex_neighbours(&self, v: usize) -> Option<Vec<usize>> {
        self.neighbours(v)
            .into_iter()
            .map(|p| match p {
                Port::Vertex { vertex, .. } => Some(vertex),
                Port::Boundary(_) => None,
            })
            .collect()
    }

    /// The neighbour of binary `v` other than `from`.
    fn other(&self, v: usize, from: usize) -> Option<usize> {
        let ns = self.vertex_neighbours(v)?;
        match ns.as_slice() {
            [a, b] if *a == from && *b != from => Some(*b),
            [a, b] if *b == from && *a != from => Some(*a),
            _ => None,
        }
    }
}

/// Parse `g` as a template diagram, up to vertex numbering and port order.
/// Boundary directions are ignored.
pub fn is_normal_form(g: &Diagram) -> Option<NormalForm> {
    if !g.is_valid() || g.loops() != 0 {
        return None;
    }
    let view = View { g, partner: g.partner_map() };
    // legs: boundary - negator - top
    let legs = g.num_legs();
    let mut tops = Vec::with_capacity(legs);
    let mut claimed: HashSet<usize> = HashSet::new();
    for k in 0..legs {
        let Port::Vertex { vertex: neg, .. } = view.partner[&Port::Boundary(k)] else {
            return None;
        };
        if view.kind(neg) != NOT {
            return None;
        }
        let top = view.neighbours(neg).into_iter().find_map(|p| match p {
            Port::Vertex { vertex, .. } => Some(vertex),
            Port::Boundary(_) => None,
        })?;
        if !matches!(view.kind(top), VertexKind::Black(_)) || !claimed.insert(neg) || !claimed.insert(top) {
            return None;
        }
        tops.push((top, neg));
    }
    let top_leg: HashMap<usize, usize> = tops.iter().enumerate().map(|(j, &(t, _))| (t, j)).collect();

    (0..g.num_vertices())
        .filter(|&v| matches!(view.kind(v), VertexKind::Black(_)) && !claimed.contains(&v))
        .find_map(|bottom| parse_from(&view, bottom, &tops, &top_leg, &claimed))
}

fn parse_from(
    view: &View,
    bottom: usize,
    tops: &[(usize, usize)],
    top_leg: &HashMap<usize, usize>,
    claimed: &HashSet<usize>,
) -> Option<NormalForm> {
    let g = view.g;
    let legs = tops.len();
    let mut used = claimed.clone();
    used.insert(bottom);
    let mut terms = Vec::new();
    let mut whites_at_top = vec![0usize; legs];
    for first in view.vertex_neighbours(bottom)? {
        let mut prev = bottom;
        let mut cur = first;
        let mut m = BigUint::one();
        let mut p = false;
        // gadget: negator, black(m+1) =m= black(m+1), negator
        if view.kind(cur) == NOT {
            let n1 = cur;
            let a = view.other(n1, prev)?;
            let VertexKind::Black(ka) = view.kind(a) else { return None };
            if ka < 3 {
                return None;
            }
            let ns = view.vertex_neighbours(a)?;
            let bs: Vec<usize> = ns.iter().copied().filter(|&x| x != n1).collect();
            if bs.len() != ka - 1 || bs.iter().any(|&x| x != bs[0]) || ns.iter().filter(|&&x| x == n1).count() != 1 {
                return None;
            }
            let b = bs[0];
            if view.kind(b) != VertexKind::Black(ka) || b == a {
                return None;
            }
            let rest: Vec<usize> = view.vertex_neighbours(b)?.into_iter().filter(|&x| x != a).collect();
            let [n2] = rest.as_slice() else { return None };
            if view.kind(*n2) != NOT {
                return None;
            }
            for v in [n1, a, b, *n2] {
                if !used.insert(v) {
                    return None;
                }
            }
            m = BigUint::from(ka - 1);
            prev = *n2;
            cur = view.other(*n2, b)?;
        }
        // sign changer: binary white followed by another white
        if view.kind(cur) == SIGN {
            let next = view.other(cur, prev)?;
            if matches!(view.kind(next), VertexKind::White(_)) && !top_leg.contains_key(&next) {
                if !used.insert(cur) {
                    return None;
                }
                p = true;
                prev = cur;
                cur = next;
            }
        }
        let VertexKind::White(k) = view.kind(cur) else { return None };
        if !used.insert(cur) {
            return None;
        }
        let ns = view.vertex_neighbours(cur)?;
        if ns.len() != k || ns.iter().filter(|&&x| x == prev).count() != 1 {
            return None;
        }
        let mut b = 0u64;
        for x in ns.into_iter().filter(|&x| x != prev) {
            let &j = top_leg.get(&x)?;
            if (b >> j) & 1 == 1 {
                return None;
            }
            b |= 1 << j;
            whites_at_top[j] += 1;
        }
        terms.push(NfTerm { p, m, b });
    }
    let q = terms.len();
    // each top: its negator plus exactly the whites counted above
    for (j, &(top, _)) in tops.iter().enumerate() {
        if view.kind(top) != VertexKind::Black(1 + whites_at_top[j]) {
            return None;
        }
    }
    // leftovers: the scalar pair when q >= 1, nothing otherwise
    let rest: Vec<usize> = (0..g.num_vertices()).filter(|v| !used.contains(v)).collect();
    let ok = match (q, rest.as_slice()) {
        (0, []) => true,
        (_, [x, y]) if q >= 1 => {
            let (bl, wh) = if view.kind(*x) == VertexKind::Black(1) { (*x, *y) } else { (*y, *x) };
            view.kind(bl) == VertexKind::Black(1)
                && view.kind(wh) == VertexKind::White(1)
                && view.vertex_neighbours(bl) == Some(vec![wh])
        }
        _ => false,
    };
    if !ok {
        return None;
    }
    NormalForm::from_terms(legs, terms).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Strands;
    use crate::normal_form::nf_of_tensor;
    use crate::semantics::{eval, Ring, Tensor};

    fn nf(legs: usize, items: &[(&str, i64)]) -> NormalForm {
        nf_of_tensor(&Tensor::from_strings(legs, items.iter().map(|(s, c)| (*s, *c))), Ring::Integers)
    }

    #[test]
    fn template_evaluates_back() {
        for a in [
            nf(3, &[("100", 1), ("010", 1), ("001", 1)]),
            nf(1, &[("1", -1)]),
            nf(2, &[("00", 3), ("11", -2), ("10", 1)]),
            nf(0, &[("", -4)]),
            nf(2, &[]),
        ] {
            let d = nf_to_diagram(&a);
            assert!(d.is_valid(), "{}", d.validate());
            assert_eq!(eval(&d, Ring::Integers).unwrap(), a.to_tensor(), "{a}");
            assert_eq!(is_normal_form(&d), Some(a.clone()), "{a}");
            assert_eq!(eval(&deloop(&a), Ring::Integers).unwrap(), a.to_tensor());
        }
    }

    #[test]
    fn zero_template_shape() {
        let d = nf_to_diagram(&NormalForm::zero(2));
        assert_eq!(d.vertices()[0], VertexKind::Black(0));
        assert_eq!(d.vertices().iter().filter(|k| **k == VertexKind::Black(1)).count(), 2);
        assert_eq!(is_normal_form(&d), Some(NormalForm::zero(2)));
    }

    #[test]
    fn one_sign_changer() {
        let d = nf_to_diagram(&nf(2, &[("11", -1)]));
        assert_eq!(d.vertices().iter().filter(|k| **k == SIGN).count(), 1);
    }

    #[test]
    fn deloop_spells_out_multiplicities() {
        let d = deloop(&nf(2, &[("00", 2)]));
        let whites = d.vertices().iter().filter(|k| matches!(k, VertexKind::White(_))).count();
        // two term whites plus the scalar white
        assert_eq!(whites, 3);
        assert_eq!(d.loops(), 0);
    }

    #[test]
    fn non_templates_are_rejected() {
        let x = Diagram::single(VertexKind::Crossing(Strands::standard()));
        assert_eq!(is_normal_form(&x), None);
        assert_eq!(is_normal_form(&Diagram::single(VertexKind::Black(2))), None);
    }

    #[test]
    fn renumbering_is_irrelevant() {
        let a = nf(2, &[("01", 2), ("11", -1)]);
        let d = nf_to_diagram(&a);
        // reverse the vertex numbering
        let n = d.num_vertices();
        let flip = |p: Port| match p {
            Port::Vertex { vertex, port } => Port::vertex(n - 1 - vertex, port),
            b => b,
        };
        let mut vs = d.vertices().to_vec();
        vs.reverse();
        let es = d.edges().iter().rev().map(|&(a, b)| (flip(b), flip(a))).collect();
        let e = Diagram::from_parts(vs, d.boundary().to_vec(), es, 0);
        assert_eq!(is_normal_form(&e), Some(a));
    }
}
