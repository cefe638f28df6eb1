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

//! Undirected open port-graphs over the ZW generators.
//!
//! A [`Diagram`] is a set of generator vertices (white and black spiders of
//! any arity, plus the four-legged crossing), a list of edges between ports,
//! and an ordered boundary. Cups, caps, swaps and identities carry no vertex:
//! they only show up as wiring. A wire that closes on itself without passing
//! through any vertex is recorded in [`Diagram::loops`].

mod builder;
mod iso;
pub mod json;
pub mod term;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

pub use builder::DiagramBuilder;
pub use term::{from_term, parse_term, to_term, Term, TermError};

/// Strand structure of a crossing: its four ports split into two pairs.
///
/// The pairs are stored in canonical order (each pair ascending, pairs
/// sorted), so two crossings with the same strands compare equal no matter
/// how the strands were written down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strands([[usize; 2]; 2]);

impl Strands {
    pub fn new(a: [usize; 2], b: [usize; 2]) -> Self {
        let mut a = a;
        let mut b = b;
        a.sort_unstable();
        b.sort_unstable();
        let mut pairs = [a, b];
        pairs.sort_unstable();
        Strands(pairs)
    }

    /// The strand pairing used by the `x` term generator: ports 0, 1 are the
    /// inputs, 2, 3 the outputs, and each strand changes sides.
    pub fn standard() -> Self {
        Strands::new([0, 3], [1, 2])
    }

    pub fn pairs(&self) -> [[usize; 2]; 2] {
        self.0
    }

    /// True when the pairs partition `{0, 1, 2, 3}`.
    pub fn is_partition(&self) -> bool {
        let mut seen = [false; 4];
        for &p in self.0.iter().flatten() {
            if p >= 4 || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        true
    }

    /// The port on the same strand as `port`.
    pub fn partner(&self, port: usize) -> Option<usize> {
        self.0.iter().find_map(|pair| {
            if pair[0] == port {
                Some(pair[1])
            } else if pair[1] == port {
                Some(pair[0])
            } else {
                None
            }
        })
    }

    /// Index (0 or 1) of the strand containing `port`.
    pub fn strand_of(&self, port: usize) -> Option<usize> {
        self.0.iter().position(|pair| pair.contains(&port))
    }
}

/// The kind of a generator vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    /// GHZ-type spider (drawn white), with the given number of legs.
    White(usize),
    /// W-type spider (drawn black), with the given number of legs.
    Black(usize),
    /// The fermionic crossing.
    Crossing(Strands),
}

impl VertexKind {
    pub fn arity(&self) -> usize {
        match *self {
            VertexKind::White(n) | VertexKind::Black(n) => n,
            VertexKind::Crossing(_) => 4,
        }
    }

    pub fn is_crossing(&self) -> bool {
        matches!(self, VertexKind::Crossing(_))
    }

    pub(crate) fn tag(&self) -> &'static str {
        match self {
            VertexKind::White(_) => "Z",
            VertexKind::Black(_) => "W",
            VertexKind::Crossing(_) => "X",
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKind::White(n) => write!(f, "White({n})"),
            VertexKind::Black(n) => write!(f, "Black({n})"),
            VertexKind::Crossing(s) => {
                let [a, b] = s.pairs();
                write!(f, "Crossing({}-{}, {}-{})", a[0], a[1], b[0], b[1])
            }
        }
    }
}

/// Direction flag of a boundary port. Only used to split a diagram back
/// into a map; semantics treat all legs alike.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    In,
    Out,
}

/// One end of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Port {
    Vertex { vertex: usize, port: usize },
    Boundary(usize),
}

impl Port {
    pub fn vertex(vertex: usize, port: usize) -> Self {
        Port::Vertex { vertex, port }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Port::Vertex { vertex, port } => write!(f, "v{vertex}.{port}"),
            Port::Boundary(k) => write!(f, "boundary {k}"),
        }
    }
}

/// A single invariant violation found by [`Diagram::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("crossing must have 4 ports (vertex {0})")]
    CrossingPorts(usize),
    #[error("edge {edge} refers to missing {port}")]
    UnknownPort { edge: usize, port: Port },
    #[error("edge {0} joins a port to itself")]
    SelfEdge(usize),
    #[error("dangling port {0}")]
    DanglingPort(Port),
    #[error("dangling boundary port {0}")]
    DanglingBoundary(usize),
    #[error("{port} appears in {count} edges")]
    PortReused { port: Port, count: usize },
}

/// All violations of a diagram; empty for a well-formed one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport(pub Vec<Violation>);

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.0
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PlugError {
    #[error("boundary port {0} does not exist on the {1} diagram")]
    UnknownPort(usize, &'static str),
    #[error("boundary port {0} of the {1} diagram is paired more than once")]
    Duplicate(usize, &'static str),
}

/// An undirected open diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Diagram {
    vertices: Vec<VertexKind>,
    boundary: Vec<Dir>,
    edges: Vec<(Port, Port)>,
    loops: usize,
}

impl Diagram {
    /// The empty diagram (the monoidal unit).
    pub fn empty() -> Self {
        Self::default()
    }

    /// Assemble a diagram from its parts without checking invariants; see
    /// [`Diagram::validate`].
    pub fn from_parts(vertices: Vec<VertexKind>, boundary: Vec<Dir>, edges: Vec<(Port, Port)>, loops: usize) -> Self {
        Diagram { vertices, boundary, edges, loops }
    }

    /// A single vertex with every port on the boundary, in port order.
    pub fn single(kind: VertexKind) -> Self {
        let n = kind.arity();
        Diagram {
            vertices: vec![kind],
            boundary: vec![Dir::Out; n],
            edges: (0..n).map(|i| (Port::Boundary(i), Port::vertex(0, i))).collect(),
            loops: 0,
        }
    }

    /// A bare wire between two boundary ports.
    pub fn wire(a: Dir, b: Dir) -> Self {
        Diagram {
            vertices: vec![],
            boundary: vec![a, b],
            edges: vec![(Port::Boundary(0), Port::Boundary(1))],
            loops: 0,
        }
    }

    pub fn vertices(&self) -> &[VertexKind] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> VertexKind {
        self.vertices[v]
    }

    pub fn boundary(&self) -> &[Dir] {
        &self.boundary
    }

    pub fn edges(&self) -> &[(Port, Port)] {
        &self.edges
    }

    /// Number of closed vertex-free circles.
    pub fn loops(&self) -> usize {
        self.loops
    }

    pub fn num_legs(&self) -> usize {
        self.boundary.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.vertices.iter().filter(|k| k.is_crossing()).count()
    }

    /// Inputs and outputs as counted by the boundary flags.
    pub fn signature(&self) -> (usize, usize) {
        let ins = self.boundary.iter().filter(|d| **d == Dir::In).count();
        (ins, self.boundary.len() - ins)
    }

    /// Same diagram with the boundary flags replaced.
    pub fn with_boundary_dirs(mut self, dirs: &[Dir]) -> Self {
        assert_eq!(dirs.len(), self.boundary.len(), "boundary length mismatch");
        self.boundary = dirs.to_vec();
        self
    }

    /// Map from every port to the port at the other end of its edge.
    pub fn partner_map(&self) -> HashMap<Port, Port> {
        let mut map = HashMap::with_capacity(self.edges.len() * 2);
        for &(a, b) in &self.edges {
            map.insert(a, b);
            map.insert(b, a);
        }
        map
    }

    /// Report every broken invariant.
    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        for (v, kind) in self.vertices.iter().enumerate() {
            if let VertexKind::Crossing(s) = kind {
                if !s.is_partition() {
                    out.push(Violation::CrossingPorts(v));
                }
            }
        }
        let mut uses: BTreeMap<Port, usize> = BTreeMap::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                out.push(Violation::SelfEdge(i));
            }
            for p in [a, b] {
                if self.port_exists(p) {
                    *uses.entry(p).or_default() += 1;
                } else {
                    out.push(Violation::UnknownPort { edge: i, port: p });
                }
            }
        }
        for (v, kind) in self.vertices.iter().enumerate() {
            for port in 0..kind.arity() {
                let p = Port::vertex(v, port);
                match uses.get(&p).copied().unwrap_or(0) {
                    0 => out.push(Violation::DanglingPort(p)),
                    1 => {}
                    count => out.push(Violation::PortReused { port: p, count }),
                }
            }
        }
        for k in 0..self.boundary.len() {
            match uses.get(&Port::Boundary(k)).copied().unwrap_or(0) {
                0 => out.push(Violation::DanglingBoundary(k)),
                1 => {}
                count => out.push(Violation::PortReused { port: Port::Boundary(k), count }),
            }
        }
        ValidationReport(out)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn port_exists(&self, p: Port) -> bool {
        match p {
            Port::Vertex { vertex, port } => vertex < self.vertices.len() && port < self.vertices[vertex].arity(),
            Port::Boundary(k) => k < self.boundary.len(),
        }
    }

    /// Reorder the boundary: position `i` of the result is old position
    /// `order[i]`. `order` must be a permutation.
    pub fn permute_boundary(&self, order: &[usize]) -> Diagram {
        assert_eq!(order.len(), self.boundary.len());
        let mut new_pos = vec![usize::MAX; order.len()];
        for (i, &old) in order.iter().enumerate() {
            new_pos[old] = i;
        }
        let remap = |p: Port| match p {
            Port::Boundary(k) => Port::Boundary(new_pos[k]),
            v => v,
        };
        Diagram {
            vertices: self.vertices.clone(),
            boundary: order.iter().map(|&k| self.boundary[k]).collect(),
            edges: self.edges.iter().map(|&(a, b)| (remap(a), remap(b))).collect(),
            loops: self.loops,
        }
    }

    /// Side-by-side juxtaposition; the boundary is `self`'s then `other`'s.
    pub fn juxtapose(&self, other: &Diagram) -> Diagram {
        self.plug(other, &[]).expect("empty pairing is always valid")
    }

    /// Plug boundary ports of `self` into boundary ports of `other`.
    ///
    /// Paired ports disappear and their wires are fused. The remaining
    /// boundary lists the unpaired ports of `self` in order, then those of
    /// `other`. Wires that close up without meeting a vertex become loops.
    pub fn plug(&self, other: &Diagram, pairing: &[(usize, usize)]) -> Result<Diagram, PlugError> {
        let mut paired_g = vec![None; self.boundary.len()];
        let mut paired_h = vec![None; other.boundary.len()];
        for &(a, b) in pairing {
            let slot_a = paired_g.get_mut(a).ok_or(PlugError::UnknownPort(a, "left"))?;
            if slot_a.is_some() {
                return Err(PlugError::Duplicate(a, "left"));
            }
            *slot_a = Some(b);
            let slot_b = paired_h.get_mut(b).ok_or(PlugError::UnknownPort(b, "right"))?;
            if slot_b.is_some() {
                return Err(PlugError::Duplicate(b, "right"));
            }
            *slot_b = Some(a);
        }

        let offset = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);

        // Residual boundary numbering.
        let mut boundary = Vec::new();
        let mut new_g = vec![None; self.boundary.len()];
        let mut new_h = vec![None; other.boundary.len()];
        for (k, dir) in self.boundary.iter().enumerate() {
            if paired_g[k].is_none() {
                new_g[k] = Some(boundary.len());
                boundary.push(*dir);
            }
        }
        for (k, dir) in other.boundary.iter().enumerate() {
            if paired_h[k].is_none() {
                new_h[k] = Some(boundary.len());
                boundary.push(*dir);
            }
        }

        // Nodes of the wiring graph: vertex ports, and boundary ports tagged
        // by side. Paired boundary ports become pass-through junctions.
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        enum Node {
            V(usize, usize),
            G(usize),
            H(usize),
        }
        let mut adj: HashMap<Node, Vec<Node>> = HashMap::new();
        let mut link = |a: Node, b: Node| {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        };
        let node_g = |p: Port| match p {
            Port::Vertex { vertex, port } => Node::V(vertex, port),
            Port::Boundary(k) => Node::G(k),
        };
        let node_h = |p: Port| match p {
            Port::Vertex { vertex, port } => Node::V(vertex + offset, port),
            Port::Boundary(k) => Node::H(k),
        };
        let mut order: Vec<(Node, Node)> = Vec::new();
        for &(a, b) in &self.edges {
            order.push((node_g(a), node_g(b)));
        }
        for &(a, b) in &other.edges {
            order.push((node_h(a), node_h(b)));
        }
        for &(a, b) in pairing {
            link(Node::G(a), Node::H(b));
        }
        for &(a, b) in &order {
            link(a, b);
        }

        let is_junction = |n: Node| match n {
            Node::G(k) => paired_g[k].is_some(),
            Node::H(k) => paired_h[k].is_some(),
            Node::V(..) => false,
        };
        let to_port = |n: Node| match n {
            Node::V(v, p) => Port::vertex(v, p),
            Node::G(k) => Port::Boundary(new_g[k].unwrap()),
            Node::H(k) => Port::Boundary(new_h[k].unwrap()),
        };

        let mut visited: std::collections::HashSet<Node> = std::collections::HashSet::new();
        let mut edges = Vec::new();
        // Walk from each terminal along junctions; follow the original edge
        // order so the output is deterministic.
        for &(a, b) in &order {
            for start in [a, b] {
                if is_junction(start) || visited.contains(&start) {
                    continue;
                }
                let mut prev = start;
                let mut cur = adj[&start][0];
                visited.insert(start);
                while is_junction(cur) {
                    visited.insert(cur);
                    let nbrs = &adj[&cur];
                    if nbrs.len() < 2 {
                        break;
                    }
                    // A junction has exactly two neighbours; take the one we
                    // did not come from (both may be equal on a 2-cycle).
                    let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
                    prev = cur;
                    cur = next;
                }
                visited.insert(cur);
                edges.push((to_port(start), to_port(cur)));
            }
        }
        // Whatever junctions remain unvisited form closed circles.
        let mut loops = self.loops + other.loops;
        let mut junctions: Vec<Node> = adj.keys().copied().filter(|n| is_junction(*n)).collect();
        junctions.sort();
        for j in junctions {
            if visited.contains(&j) {
                continue;
            }
            loops += 1;
            let mut prev = j;
            let mut cur = j;
            loop {
                visited.insert(cur);
                let nbrs = &adj[&cur];
                let next = if nbrs[0] == prev && nbrs.len() > 1 { nbrs[1] } else { nbrs[0] };
                prev = cur;
                cur = next;
                if visited.contains(&cur) {
                    break;
                }
            }
        }

        Ok(Diagram { vertices, boundary, edges, loops })
    }

    /// Replace the vertices in `region` by `replacement`.
    ///
    /// `attach[k]` is the port of a region vertex whose outside wire gets
    /// connected to boundary port `k` of the replacement. Every region port
    /// not listed in `attach` must be wired to another region port; those
    /// wires are dropped together with the region. Host boundary order is
    /// preserved.
    pub fn substitute(&self, region: &[usize], replacement: &Diagram, attach: &[Port]) -> Diagram {
        assert_eq!(attach.len(), replacement.num_legs(), "attachment arity mismatch");
        let in_region = |v: usize| region.contains(&v);
        let mut new_index = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for (v, kind) in self.vertices.iter().enumerate() {
            if !in_region(v) {
                new_index[v] = vertices.len();
                vertices.push(*kind);
            }
        }
        let host_legs = self.boundary.len();
        let hole_of: HashMap<Port, usize> = attach.iter().enumerate().map(|(k, p)| (*p, host_legs + k)).collect();
        let map_port = |p: Port| -> Option<Port> {
            match p {
                Port::Boundary(_) => Some(p),
                Port::Vertex { vertex, port } if !in_region(vertex) => Some(Port::vertex(new_index[vertex], port)),
                _ => hole_of.get(&p).map(|&k| Port::Boundary(k)),
            }
        };
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            if let (Some(a), Some(b)) = (map_port(a), map_port(b)) {
                edges.push((a, b));
            }
        }
        let mut boundary = self.boundary.clone();
        boundary.extend(std::iter::repeat_n(Dir::Out, attach.len()));
        let context = Diagram { vertices, boundary, edges, loops: self.loops };
        let pairing: Vec<(usize, usize)> = (0..attach.len()).map(|k| (host_legs + k, k)).collect();
        context.plug(replacement, &pairing).expect("hole pairing is well formed")
    }

    /// Split off the sub-diagram induced by `region`.
    ///
    /// Returns the region as a diagram whose boundary lists, for each region
    /// port wired outside the region, one leg (in port order of `cut`),
    /// together with that list of cut ports.
    pub fn induced(&self, region: &[usize]) -> (Diagram, Vec<Port>) {
        let mut new_index = HashMap::new();
        let mut vertices = Vec::new();
        for &v in region {
            new_index.insert(v, vertices.len());
            vertices.push(self.vertices[v]);
        }
        let inside = |p: &Port| matches!(p, Port::Vertex { vertex, .. } if new_index.contains_key(vertex));
        let local = |p: Port| match p {
            Port::Vertex { vertex, port } => Port::vertex(new_index[&vertex], port),
            b => b,
        };
        let mut edges = Vec::new();
        let mut cut = Vec::new();
        for &(a, b) in &self.edges {
            match (inside(&a), inside(&b)) {
                (true, true) => edges.push((local(a), local(b))),
                (true, false) => {
                    edges.push((local(a), Port::Boundary(cut.len())));
                    cut.push(a);
                }
                (false, true) => {
                    edges.push((local(b), Port::Boundary(cut.len())));
                    cut.push(b);
                }
                _ => {}
            }
        }
        let d = Diagram { vertices, boundary: vec![Dir::Out; cut.len()], edges, loops: 0 };
        (d, cut)
    }

    /// Connected components of the vertex set (vertices joined by an edge,
    /// possibly through boundary-free wiring). Isolated boundary wires do
    /// not appear.
    pub fn vertex_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for &(a, b) in &self.edges {
            if let (Port::Vertex { vertex: u, .. }, Port::Vertex { vertex: v, .. }) = (a, b) {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru.max(rv)] = ru.min(rv);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// Structural equality up to vertex renumbering, port permutation on
    /// spiders and strand symmetries of crossings. Boundary order and flags
    /// must agree. Intended for tests on small diagrams (at most 64
    /// vertices).
    pub fn is_isomorphic(&self, other: &Diagram) -> bool {
        iso::isomorphic(self, other)
    }
}
