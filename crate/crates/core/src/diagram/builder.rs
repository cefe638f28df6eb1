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

use super::{Diagram, Dir, Port, Strands, VertexKind};

/// Incremental construction with automatic port allocation.
///
/// Ports of a vertex are handed out lowest free first as wires are
/// attached; [`DiagramBuilder::build`] panics if any port or boundary leg
/// was left unconnected.
#[derive(Clone, Debug)]
pub struct DiagramBuilder {
    vertices: Vec<VertexKind>,
    used: Vec<Vec<bool>>,
    boundary: Vec<Option<Port>>,
    edges: Vec<(Port, Port)>,
}

impl DiagramBuilder {
    /// A builder for a diagram with `legs` boundary legs.
    pub fn new(legs: usize) -> Self {
        DiagramBuilder { vertices: Vec::new(), used: Vec::new(), boundary: vec![None; legs], edges: Vec::new() }
    }

    pub fn add(&mut self, kind: VertexKind) -> usize {
        self.vertices.push(kind);
        self.used.push(vec![false; kind.arity()]);
        self.vertices.len() - 1
    }

    pub fn black(&mut self, n: usize) -> usize {
        self.add(VertexKind::Black(n))
    }

    pub fn white(&mut self, n: usize) -> usize {
        self.add(VertexKind::White(n))
    }

    pub fn crossing(&mut self) -> usize {
        self.add(VertexKind::Crossing(Strands::standard()))
    }

    /// Next free port of `v`.
    pub fn port(&mut self, v: usize) -> Port {
        let p = self.used[v].iter().position(|u| !u).unwrap_or_else(|| panic!("vertex {v} has no free port"));
        self.used[v][p] = true;
        Port::vertex(v, p)
    }

    pub fn connect(&mut self, u: usize, v: usize) {
        let a = self.port(u);
        let b = self.port(v);
        self.edges.push((a, b));
    }

    /// Wire two explicit ports; ports already handed out by
    /// [`DiagramBuilder::port`] are accepted.
    pub fn connect_ports(&mut self, a: Port, b: Port) {
        for p in [a, b] {
            if let Port::Vertex { vertex, port } = p {
                self.used[vertex][port] = true;
            }
        }
        self.edges.push((a, b));
    }

    /// Wire the next free port of `v` to boundary leg `k`.
    pub fn leg(&mut self, v: usize, k: usize) {
        let p = self.port(v);
        self.leg_port(p, k);
    }

    pub fn leg_port(&mut self, p: Port, k: usize) {
        assert!(self.boundary[k].is_none(), "leg {k} already wired");
        self.boundary[k] = Some(p);
        self.edges.push((p, Port::Boundary(k)));
    }

    /// Put `kind` (binary) between the next port of `v` and leg `k`.
    pub fn leg_through(&mut self, v: usize, kind: VertexKind, k: usize) {
        let w = self.add(kind);
        self.connect(v, w);
        self.leg(w, k);
    }

    /// Join the next ports of `u` and `v` through a binary vertex.
    pub fn connect_through(&mut self, u: usize, kind: VertexKind, v: usize) {
        let w = self.add(kind);
        self.connect(u, w);
        self.connect(w, v);
    }

    pub fn build(self) -> Diagram {
        for (v, k) in self.vertices.iter().enumerate() {
            assert!(self.used[v].iter().all(|u| *u), "vertex {v} ({k}) has free ports");
        }
        assert!(self.boundary.iter().all(Option::is_some), "unwired boundary leg");
        let legs = self.boundary.len();
        Diagram::from_parts(self.vertices, vec![Dir::Out; legs], self.edges, 0)
    }
}
