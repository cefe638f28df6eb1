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

//! Graphviz export.
//!
//! Nodes are layered by their distance from the boundary, which draws a
//! normal-form template with the boundary on top and the term-selecting
//! black vertex at the bottom.

use std::collections::VecDeque;
use std::fmt::Write;

use crate::diagram::{Diagram, Dir, Port, VertexKind};

fn node_attrs(kind: VertexKind) -> String {
    match kind {
        VertexKind::White(n) => format!("shape=circle, style=filled, fillcolor=white, label=\"{n}\""),
        VertexKind::Black(n) => {
            format!("shape=circle, style=filled, fillcolor=black, fontcolor=white, label=\"{n}\"")
        }
        VertexKind::Crossing(s) => {
            let [a, b] = s.pairs();
            format!("shape=box, style=filled, fillcolor=lightgray, label=\"X {}{}|{}{}\"", a[0], a[1], b[0], b[1])
        }
    }
}

fn endpoint(p: Port) -> String {
    match p {
        Port::Boundary(k) => format!("b{k}"),
        Port::Vertex { vertex, .. } => format!("v{vertex}"),
    }
}

/// Distance of every vertex from the nearest boundary terminal; vertices
/// with no path to the boundary sit one layer below the deepest one.
fn layers(g: &Diagram) -> Vec<usize> {
    let n = g.num_vertices();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &(a, b) in g.edges() {
        match (a, b) {
            (Port::Vertex { vertex: u, .. }, Port::Vertex { vertex: v, .. }) => {
                adj[u].push(v);
                adj[v].push(u);
            }
            (Port::Vertex { vertex: v, .. }, Port::Boundary(_))
            | (Port::Boundary(_), Port::Vertex { vertex: v, .. })
                if dist[v] == usize::MAX =>
            {
                dist[v] = 1;
                queue.push_back(v);
            }
            _ => {}
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let deepest = dist.iter().copied().filter(|&d| d != usize::MAX).max().unwrap_or(0);
    dist.iter().map(|&d| if d == usize::MAX { deepest + 1 } else { d }).collect()
}

/// Deterministic DOT text for `g`.
pub fn render_dot(g: &Diagram) -> String {
    let mut out = String::new();
    out.push_str("graph zw {\n  rankdir=TB;\n  node [fontname=\"Helvetica\", fontsize=10];\n");
    for (k, d) in g.boundary().iter().enumerate() {
        let dir = match d {
            Dir::In => "in",
            Dir::Out => "out",
        };
        writeln!(out, "  b{k} [shape=plaintext, label=\"{k} {dir}\"];").unwrap();
    }
    if g.num_legs() > 0 {
        let names: Vec<String> = (0..g.num_legs()).map(|k| format!("b{k}")).collect();
        writeln!(out, "  {{ rank=min; {}; }}", names.join("; ")).unwrap();
    }
    for (v, kind) in g.vertices().iter().enumerate() {
        writeln!(out, "  v{v} [{}];", node_attrs(*kind)).unwrap();
    }
    let depth = layers(g);
    let max = depth.iter().copied().max().unwrap_or(0);
    for d in 1..=max {
        let names: Vec<String> = (0..g.num_vertices()).filter(|&v| depth[v] == d).map(|v| format!("v{v}")).collect();
        if !names.is_empty() {
            writeln!(out, "  {{ rank=same; {}; }}", names.join("; ")).unwrap();
        }
    }
    for i in 0..g.loops() {
        writeln!(out, "  loop{i} [shape=circle, label=\"\", width=0.2];").unwrap();
    }
    for &(a, b) in g.edges() {
        let mut attrs = Vec::new();
        // crossing ports matter, spider ports do not
        for (p, side) in [(a, "taillabel"), (b, "headlabel")] {
            if let Port::Vertex { vertex, port } = p {
                if g.vertex(vertex).is_crossing() {
                    attrs.push(format!("{side}=\"{port}\""));
                }
            }
        }
        let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
        writeln!(out, "  {} -- {}{};", endpoint(a), endpoint(b), attrs).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn black_spider_with_three_terminals() {
        let g = crate::diagram::from_term(&crate::diagram::parse_term("w(0,3)").unwrap()).unwrap();
        let dot = render_dot(&g);
        assert_eq!(dot.matches("fillcolor=black").count(), 1);
        assert_eq!(dot.matches("shape=plaintext").count(), 3);
        assert_eq!(dot, render_dot(&g.clone()));
    }
}
