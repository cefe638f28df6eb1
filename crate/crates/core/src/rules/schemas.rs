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

//! Generated rule families. All boundary legs are outputs and the boundary
//! map is the identity.

use super::Rule;
use crate::diagram::{Diagram, DiagramBuilder, Port, VertexKind};

const NOT: VertexKind = VertexKind::Black(2);
const SIGN: VertexKind = VertexKind::White(2);

fn spider(make: fn(usize) -> VertexKind, mid: VertexKind, n: usize, m: usize) -> (Diagram, Diagram) {
    let mut b = DiagramBuilder::new(n + m);
    let x = b.add(make(n + 1));
    let y = b.add(make(m + 1));
    (0..n).for_each(|k| b.leg(x, k));
    (0..m).for_each(|k| b.leg(y, n + k));
    b.connect_through(x, mid, y);
    let lhs = b.build();

    let mut b = DiagramBuilder::new(n + m);
    let v = b.add(make(n + m));
    (0..n + m).for_each(|k| b.leg(v, k));
    (lhs, b.build())
}

/// Two black vertices fused across a binary black vertex.
pub fn sp_w(n: usize, m: usize) -> Rule {
    let (l, r) = spider(VertexKind::Black, NOT, n, m);
    Rule::new(format!("sp_W({n},{m})"), l, r).with_params(&[n, m])
}

/// Two white vertices fused across a binary white vertex.
pub fn sp_z(n: usize, m: usize) -> Rule {
    let (l, r) = spider(VertexKind::White, SIGN, n, m);
    Rule::new(format!("sp_Z({n},{m})"), l, r).with_params(&[n, m])
}

fn self_loop(make: fn(usize) -> VertexKind, n: usize) -> (Diagram, Diagram) {
    let mut b = DiagramBuilder::new(n);
    let v = b.add(make(n + 2));
    (0..n).for_each(|k| b.leg(v, k));
    let (p, q) = (b.port(v), b.port(v));
    b.connect_ports(p, q);
    let lhs = b.build();
    let mut b = DiagramBuilder::new(n);
    let v = b.add(make(n));
    (0..n).for_each(|k| b.leg(v, k));
    (lhs, b.build())
}

/// A black vertex loses a self-loop.
pub fn tr_w(n: usize) -> Rule {
    let (l, r) = self_loop(VertexKind::Black, n);
    Rule::new(format!("tr_W({n})"), l, r).with_params(&[n])
}

/// A white vertex loses a self-loop.
pub fn tr_z(n: usize) -> Rule {
    let (l, r) = self_loop(VertexKind::White, n);
    Rule::new(format!("tr_Z({n})"), l, r).with_params(&[n])
}

/// The sign changer moves between legs of a white vertex.
pub fn ph(n: usize) -> Rule {
    assert!(n >= 2);
    let side = |signed: usize| {
        let mut b = DiagramBuilder::new(n);
        let v = b.white(n);
        for k in 0..n {
            if k == signed {
                b.leg_through(v, SIGN, k);
            } else {
                b.leg(v, k);
            }
        }
        b.build()
    };
    Rule::new(format!("ph({n})"), side(0), side(n - 1)).with_params(&[n]).derived()
}

/// Negating one leg of a black vertex absorbs a sign changer on every leg.
pub fn am_w(n: usize) -> Rule {
    assert!(n >= 1);
    let mut b = DiagramBuilder::new(n);
    let v = b.black(n);
    let neg = b.add(NOT);
    b.connect(v, neg);
    b.leg_through(neg, SIGN, 0);
    (1..n).for_each(|k| b.leg_through(v, SIGN, k));
    let lhs = b.build();

    let mut b = DiagramBuilder::new(n);
    let v = b.black(n);
    b.leg_through(v, NOT, 0);
    (1..n).for_each(|k| b.leg(v, k));
    Rule::new(format!("am_W({n})"), lhs, b.build()).with_params(&[n]).derived()
}

/// A signed white vertex absorbs a negation on every leg.
pub fn am_z(n: usize) -> Rule {
    assert!(n >= 1);
    let mut b = DiagramBuilder::new(n);
    let v = b.white(n);
    let s = b.add(SIGN);
    b.connect(v, s);
    b.leg_through(s, NOT, 0);
    (1..n).for_each(|k| b.leg_through(v, NOT, k));
    let lhs = b.build();

    let mut b = DiagramBuilder::new(n);
    let v = b.white(n);
    b.leg_through(v, SIGN, 0);
    (1..n).for_each(|k| b.leg(v, k));
    Rule::new(format!("am_Z({n})"), lhs, b.build()).with_params(&[n]).derived()
}

/// Black bialgebra: two wired black vertices become a complete bipartite
/// graph, wires crossing through crossing vertices.
pub fn ba_w(n: usize, m: usize) -> Rule {
    let mut b = DiagramBuilder::new(n + m);
    let x = b.black(n + 1);
    let y = b.black(m + 1);
    (0..n).for_each(|k| b.leg(x, k));
    (0..m).for_each(|k| b.leg(y, n + k));
    b.connect(x, y);
    let lhs = b.build();

    let mut b = DiagramBuilder::new(n + m);
    let tops: Vec<usize> = (0..n).map(|_| b.black(m + 1)).collect();
    let bottoms: Vec<usize> = (0..m).map(|_| b.black(n + 1)).collect();
    for (i, &t) in tops.iter().enumerate() {
        b.leg_through(t, NOT, i);
    }
    for (j, &u) in bottoms.iter().enumerate() {
        b.leg_through(u, NOT, n + j);
    }
    // path[(i, j)]: the crossing ports wire (i, j) passes through, in order
    let mut path = vec![vec![Vec::<(Port, Port)>::new(); m]; n];
    for i in 0..n {
        for j in 0..m {
            for i2 in i + 1..n {
                for j2 in 0..j {
                    let c = b.crossing();
                    path[i][j].push((Port::vertex(c, 0), Port::vertex(c, 3)));
                    path[i2][j2].push((Port::vertex(c, 1), Port::vertex(c, 2)));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..m {
            let mut end = b.port(tops[i]);
            for &(a, z) in &path[i][j] {
                b.connect_ports(end, a);
                end = z;
            }
            let last = b.port(bottoms[j]);
            b.connect_ports(end, last);
        }
    }
    Rule::new(format!("ba_W({n},{m})"), lhs, b.build()).with_params(&[n, m]).derived()
}

/// Black/white bialgebra: a black vertex wired to a white one through a
/// negation becomes a complete bipartite graph with plain wires.
pub fn ba(n: usize, k: usize) -> Rule {
    assert!(k >= 1);
    let mut b = DiagramBuilder::new(n + k);
    let x = b.black(n + 1);
    let y = b.white(k + 1);
    (0..n).for_each(|i| b.leg(x, i));
    (0..k).for_each(|j| b.leg(y, n + j));
    b.connect_through(x, NOT, y);
    let lhs = b.build();

    let mut b = DiagramBuilder::new(n + k);
    let whites: Vec<usize> = (0..n).map(|_| b.white(k + 1)).collect();
    let blacks: Vec<usize> = (0..k).map(|_| b.black(n + 1)).collect();
    for (i, &w) in whites.iter().enumerate() {
        b.leg(w, i);
    }
    for (j, &u) in blacks.iter().enumerate() {
        b.leg_through(u, NOT, n + j);
    }
    for &w in &whites {
        for &u in &blacks {
            b.connect(w, u);
        }
    }
    Rule::new(format!("ba({n},{k})"), lhs, b.build()).with_params(&[n, k]).derived()
}

fn parallel(top: VertexKind, plain: usize, signed: usize) -> Diagram {
    let mut b = DiagramBuilder::new(2);
    let x = b.add(top);
    let y = b.black(1 + plain + signed);
    b.leg(x, 0);
    b.leg(y, 1);
    (0..plain).for_each(|_| b.connect(x, y));
    (0..signed).for_each(|_| b.connect_through(x, SIGN, y));
    b.build()
}

/// Each signed wire between two black vertices cancels a plain one.
pub fn lp_w(n: usize, m: usize) -> Rule {
    assert!(n >= m);
    let lhs = parallel(VertexKind::Black(1 + n + m), n, m);
    let rhs = parallel(VertexKind::Black(1 + n - m), n - m, 0);
    Rule::new(format!("lp_W({n},{m})"), lhs, rhs).with_params(&[n, m]).derived()
}

/// A white and a black vertex joined by `n >= 2` wires come apart.
pub fn lp(n: usize) -> Rule {
    assert!(n >= 2);
    let lhs = parallel(VertexKind::White(1 + n), n, 0);
    let mut b = DiagramBuilder::new(2);
    let zero = b.black(1);
    b.leg_through(zero, NOT, 0);
    let one = b.black(1);
    b.leg(one, 1);
    Rule::new(format!("lp({n})"), lhs, b.build()).with_params(&[n]).derived()
}

/// `n` parallel wires between black vertices vanish; sound only mod `n`.
pub fn or(n: usize) -> Rule {
    assert!(n >= 1);
    let lhs = parallel(VertexKind::Black(n + 1), n, 0);
    let rhs = parallel(VertexKind::Black(1), 0, 0);
    let mut r = Rule::new(format!("or({n})"), lhs, rhs).with_params(&[n]);
    r.modulus = Some(n as u64);
    r
}
