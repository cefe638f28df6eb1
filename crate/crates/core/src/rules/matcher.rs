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

// Backtracking embedding of a rule's left-hand side into a host diagram.
//
// Vertices are placed by walking the lhs wires breadth first from one
// vertex, so every wire after the first placement has a placed end and the
// host partner of its image port decides the other end. Ports of white and
// black vertices are interchangeable; a crossing's ports may only move as
// whole strands.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use super::Rule;
use crate::diagram::{Diagram, Port, VertexKind};

/// Largest left-hand side the matcher accepts.
pub const MAX_LHS_VERTICES: usize = 6;

/// An embedding of `rule.lhs` into a host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    /// Host vertex of each lhs vertex.
    pub vertices: Vec<usize>,
    /// Host port of each port of each lhs vertex.
    pub ports: Vec<Vec<usize>>,
    /// Host port standing in for each lhs boundary leg.
    pub attach: Vec<Port>,
}

impl Match {
    /// Image as a set: host vertices and host wires covered by lhs wires.
    fn key(&self, host_partner: &HashMap<Port, Port>, lhs: &Diagram) -> (Vec<usize>, Vec<(Port, Port)>) {
        let mut vs = self.vertices.clone();
        vs.sort_unstable();
        let mut es: Vec<(Port, Port)> = lhs
            .edges()
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .filter_map(|p| match p {
                Port::Vertex { vertex, port } => {
                    let h = Port::vertex(self.vertices[vertex], self.ports[vertex][port]);
                    let o = host_partner[&h];
                    Some(if h < o { (h, o) } else { (o, h) })
                }
                Port::Boundary(_) => None,
            })
            .collect();
        es.sort_unstable();
        es.dedup();
        (vs, es)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("rule {0}: left-hand side is outside the matcher's scope ({1})")]
    OutOfScope(String, &'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("match does not fit the host diagram")]
    Stale,
}

fn same_class(a: VertexKind, b: VertexKind) -> bool {
    match (a, b) {
        (VertexKind::Crossing(_), VertexKind::Crossing(_)) => true,
        _ => a == b,
    }
}

fn check_scope(rule: &Rule) -> Result<(), MatchError> {
    let l = &rule.lhs;
    let err = |why| Err(MatchError::OutOfScope(rule.name.clone(), why));
    if l.num_vertices() == 0 {
        return err("no vertices");
    }
    if l.num_vertices() > MAX_LHS_VERTICES {
        return err("more than 6 vertices");
    }
    if l.loops() > 0 {
        return err("closed loops");
    }
    if l.edges().iter().any(|(a, b)| matches!((a, b), (Port::Boundary(_), Port::Boundary(_)))) {
        return err("bare boundary wire");
    }
    if l.vertex_components().len() != 1 {
        return err("disconnected");
    }
    Ok(())
}

struct Search<'a> {
    lhs: &'a Diagram,
    host: &'a Diagram,
    host_partner: HashMap<Port, Port>,
    // lhs internal wires in breadth-first order
    wires: Vec<(Port, Port)>,
    root: usize,
    vmap: Vec<Option<usize>>,
    pmap: Vec<Vec<Option<usize>>>,
    used_vertex: Vec<bool>,
    used_port: HashSet<Port>,
    out: Vec<Match>,
}

impl<'a> Search<'a> {
    fn new(lhs: &'a Diagram, host: &'a Diagram) -> Self {
        let lp = lhs.partner_map();
        let root = 0;
        let mut seen = vec![false; lhs.num_vertices()];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        let mut wires = Vec::new();
        let mut listed = HashSet::new();
        while let Some(v) = queue.pop_front() {
            for p in 0..lhs.vertex(v).arity() {
                let a = Port::vertex(v, p);
                let b = lp[&a];
                if let Port::Vertex { vertex: w, .. } = b {
                    if listed.insert(if a < b { (a, b) } else { (b, a) }) {
                        wires.push((a, b));
                    }
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        Search {
            lhs,
            host,
            host_partner: host.partner_map(),
            wires,
            root,
            vmap: vec![None; lhs.num_vertices()],
            pmap: lhs.vertices().iter().map(|k| vec![None; k.arity()]).collect(),
            used_vertex: vec![false; host.num_vertices()],
            used_port: HashSet::new(),
            out: Vec::new(),
        }
    }

    fn run(&mut self) {
        let kind = self.lhs.vertex(self.root);
        for h in 0..self.host.num_vertices() {
            if same_class(kind, self.host.vertex(h)) {
                self.place(self.root, h);
                self.wire(0);
                self.unplace(self.root, h);
            }
        }
    }

    fn place(&mut self, v: usize, h: usize) {
        self.vmap[v] = Some(h);
        self.used_vertex[h] = true;
    }

    fn unplace(&mut self, v: usize, h: usize) {
        self.vmap[v] = None;
        self.used_vertex[h] = false;
    }

    /// May lhs port `p` of `v` take host port `hp` of its image?
    fn port_ok(&self, v: usize, p: usize, hp: usize) -> bool {
        let h = self.vmap[v].expect("placed");
        if self.used_port.contains(&Port::vertex(h, hp)) {
            return false;
        }
        match (self.lhs.vertex(v), self.host.vertex(h)) {
            (VertexKind::Crossing(sl), VertexKind::Crossing(sh)) => {
                let lp = sl.partner(p).expect("crossing port");
                let hq = sh.partner(hp).expect("crossing port");
                match self.pmap[v][lp] {
                    Some(x) => x == hq,
                    None => !self.used_port.contains(&Port::vertex(h, hq)),
                }
            }
            _ => true,
        }
    }

    fn assign(&mut self, v: usize, p: usize, hp: usize) {
        self.pmap[v][p] = Some(hp);
        self.used_port.insert(Port::vertex(self.vmap[v].unwrap(), hp));
    }

    fn unassign(&mut self, v: usize, p: usize) {
        let hp = self.pmap[v][p].take().expect("assigned");
        self.used_port.remove(&Port::vertex(self.vmap[v].unwrap(), hp));
    }

    fn wire(&mut self, i: usize) {
        if i == self.wires.len() {
            self.finish();
            return;
        }
        let (a, b) = self.wires[i];
        let (Port::Vertex { vertex: u, port: p }, Port::Vertex { vertex: v, port: q }) = (a, b) else {
            unreachable!("internal wire")
        };
        let hu = self.vmap[u].expect("wires are ordered from placed vertices");
        let choices: Vec<usize> = match self.pmap[u][p] {
            Some(x) => vec![x],
            None => (0..self.host.vertex(hu).arity()).filter(|&x| self.port_ok(u, p, x)).collect(),
        };
        let fresh_u = self.pmap[u][p].is_none();
        for x in choices {
            if fresh_u {
                self.assign(u, p, x);
            }
            let Port::Vertex { vertex: hv, port: y } = self.host_partner[&Port::vertex(hu, x)] else {
                if fresh_u {
                    self.unassign(u, p);
                }
                continue;
            };
            match self.vmap[v] {
                Some(h) if h == hv => match self.pmap[v][q] {
                    Some(z) if z == y => self.wire(i + 1),
                    Some(_) => {}
                    None if self.port_ok(v, q, y) => {
                        self.assign(v, q, y);
                        self.wire(i + 1);
                        self.unassign(v, q);
                    }
                    None => {}
                },
                Some(_) => {}
                None => {
                    if !self.used_vertex[hv] && same_class(self.lhs.vertex(v), self.host.vertex(hv)) {
                        self.place(v, hv);
                        if self.port_ok(v, q, y) {
                            self.assign(v, q, y);
                            self.wire(i + 1);
                            self.unassign(v, q);
                        }
                        self.unplace(v, hv);
                    }
                }
            }
            if fresh_u {
                self.unassign(u, p);
            }
        }
    }

    /// Give the boundary-bound lhs ports the leftover host ports.
    fn finish(&mut self) {
        let mut ports = self.pmap.clone();
        for (v, slot) in ports.iter_mut().enumerate() {
            let h = self.vmap[v].expect("lhs is connected");
            let hk = self.host.vertex(h);
            let mut free: BTreeSet<usize> = (0..hk.arity()).collect();
            for x in slot.iter().flatten() {
                free.remove(x);
            }
            for p in 0..slot.len() {
                if slot[p].is_some() {
                    continue;
                }
                let pick = match (self.lhs.vertex(v), hk) {
                    (VertexKind::Crossing(sl), VertexKind::Crossing(sh)) => {
                        let lp = sl.partner(p).unwrap();
                        match slot[lp] {
                            Some(x) => sh.partner(x).unwrap(),
                            None => *free
                                .iter()
                                .find(|&&x| free.contains(&sh.partner(x).unwrap()))
                                .expect("a free strand remains"),
                        }
                    }
                    _ => *free.iter().next().expect("arities agree"),
                };
                free.remove(&pick);
                slot[p] = Some(pick);
            }
        }
        let ports: Vec<Vec<usize>> = ports.into_iter().map(|s| s.into_iter().map(Option::unwrap).collect()).collect();
        let vertices: Vec<usize> = self.vmap.iter().map(|v| v.unwrap()).collect();
        let mut attach = vec![Port::Boundary(usize::MAX); self.lhs.num_legs()];
        for &(a, b) in self.lhs.edges() {
            for (x, y) in [(a, b), (b, a)] {
                if let (Port::Vertex { vertex, port }, Port::Boundary(k)) = (x, y) {
                    attach[k] = Port::vertex(vertices[vertex], ports[vertex][port]);
                }
            }
        }
        self.out.push(Match { vertices, ports, attach });
    }
}

/// All embeddings of `rule.lhs` into `host`, one per distinct image.
pub fn find_matches(rule: &Rule, host: &Diagram) -> Result<Vec<Match>, MatchError> {
    check_scope(rule)?;
    let mut s = Search::new(&rule.lhs, host);
    s.run();
    let mut seen = HashSet::new();
    let partner = &s.host_partner;
    let lhs = &rule.lhs;
    Ok(s.out.iter().filter(|m| seen.insert(m.key(partner, lhs))).cloned().collect())
}

fn fits(rule: &Rule, host: &Diagram, m: &Match) -> bool {
    let l = &rule.lhs;
    if m.vertices.len() != l.num_vertices() || m.attach.len() != l.num_legs() {
        return false;
    }
    let distinct: HashSet<_> = m.vertices.iter().collect();
    if distinct.len() != m.vertices.len() || m.vertices.iter().any(|&h| h >= host.num_vertices()) {
        return false;
    }
    for (v, &h) in m.vertices.iter().enumerate() {
        if !same_class(l.vertex(v), host.vertex(h)) || m.ports[v].len() != l.vertex(v).arity() {
            return false;
        }
    }
    let partner = host.partner_map();
    let image = |p: Port| match p {
        Port::Vertex { vertex, port } => Some(Port::vertex(m.vertices[vertex], m.ports[vertex][port])),
        Port::Boundary(_) => None,
    };
    l.edges().iter().all(|&(a, b)| match (image(a), image(b)) {
        (Some(x), Some(y)) => partner.get(&x) == Some(&y),
        (Some(x), None) | (None, Some(x)) => partner.contains_key(&x),
        (None, None) => false,
    })
}

/// Replace the image of `rule.lhs` by `rule.rhs`.
pub fn apply(rule: &Rule, host: &Diagram, m: &Match) -> Result<Diagram, ApplyError> {
    if !fits(rule, host, m) {
        return Err(ApplyError::Stale);
    }
    // rhs leg boundary_map[k] is glued where lhs leg k was
    let mut attach = vec![Port::Boundary(usize::MAX); m.attach.len()];
    for (k, &j) in rule.boundary_map.iter().enumerate() {
        attach[j] = m.attach[k];
    }
    Ok(host.substitute(&m.vertices, &rule.rhs, &attach))
}
