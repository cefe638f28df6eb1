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

// Boundary-anchored backtracking isomorphism for small diagrams.

use std::collections::{BTreeMap, VecDeque};

use super::{Diagram, Port, VertexKind};

const MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum End {
    B(usize),
    V(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Class {
    White(usize),
    Black(usize),
    Crossing,
}

fn class(k: VertexKind) -> Class {
    match k {
        VertexKind::White(n) => Class::White(n),
        VertexKind::Black(n) => Class::Black(n),
        VertexKind::Crossing(_) => Class::Crossing,
    }
}

struct View {
    classes: Vec<Class>,
    // per vertex, per port: the far end
    ends: Vec<Vec<End>>,
    // boundary port -> far end
    boundary_ends: Vec<End>,
    // number of edges between each ordered pair of vertices
    multiplicity: BTreeMap<(usize, usize), usize>,
    // boundary distance, used to order the search
    depth: Vec<usize>,
}

impl View {
    fn new(g: &Diagram) -> View {
        let end = |p: Port| match p {
            Port::Boundary(k) => End::B(k),
            Port::Vertex { vertex, .. } => End::V(vertex),
        };
        let mut ends: Vec<Vec<End>> = g.vertices.iter().map(|k| vec![End::B(usize::MAX); k.arity()]).collect();
        let mut boundary_ends = vec![End::B(usize::MAX); g.boundary.len()];
        let mut multiplicity = BTreeMap::new();
        for &(a, b) in &g.edges {
            for (x, y) in [(a, b), (b, a)] {
                match x {
                    Port::Vertex { vertex, port } => ends[vertex][port] = end(y),
                    Port::Boundary(k) => boundary_ends[k] = end(y),
                }
            }
            if let (Port::Vertex { vertex: u, .. }, Port::Vertex { vertex: v, .. }) = (a, b) {
                *multiplicity.entry((u, v)).or_insert(0) += 1;
                if u != v {
                    *multiplicity.entry((v, u)).or_insert(0) += 1;
                }
            }
        }
        let mut depth = vec![usize::MAX; g.vertices.len()];
        let mut queue = VecDeque::new();
        for e in &boundary_ends {
            if let End::V(v) = *e {
                if depth[v] == usize::MAX {
                    depth[v] = 0;
                    queue.push_back(v);
                }
            }
        }
        while let Some(v) = queue.pop_front() {
            for e in &ends[v] {
                if let End::V(u) = *e {
                    if depth[u] == usize::MAX {
                        depth[u] = depth[v] + 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        // vertices in closed components keep depth usize::MAX
        View { classes: g.vertices.iter().map(|k| class(*k)).collect(), ends, boundary_ends, multiplicity, depth }
    }

    fn mult(&self, u: usize, v: usize) -> usize {
        self.multiplicity.get(&(u, v)).copied().unwrap_or(0)
    }

    fn boundary_set(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.ends[v]
            .iter()
            .filter_map(|e| match e {
                End::B(k) => Some(*k),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }
}

pub(super) fn isomorphic(g: &Diagram, h: &Diagram) -> bool {
    if g.vertices.len() != h.vertices.len()
        || g.boundary != h.boundary
        || g.loops != h.loops
        || g.edges.len() != h.edges.len()
    {
        return false;
    }
    assert!(g.vertices.len() <= MAX_VERTICES, "isomorphism check limited to {MAX_VERTICES} vertices");
    let gv = View::new(g);
    let hv = View::new(h);

    let mut gc = gv.classes.clone();
    let mut hc = hv.classes.clone();
    gc.sort();
    hc.sort();
    if gc != hc {
        return false;
    }
    // Pure boundary wires must coincide.
    for (k, e) in gv.boundary_ends.iter().enumerate() {
        if let End::B(j) = e {
            if hv.boundary_ends[k] != End::B(*j) {
                return false;
            }
        }
    }

    let mut order: Vec<usize> = (0..g.vertices.len()).collect();
    order.sort_by_key(|&v| (gv.depth[v], gv.classes[v], v));
    let mut map = vec![usize::MAX; g.vertices.len()];
    let mut used = vec![false; h.vertices.len()];
    search(g, h, &gv, &hv, &order, 0, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn search(
    g: &Diagram,
    h: &Diagram,
    gv: &View,
    hv: &View,
    order: &[usize],
    i: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if i == order.len() {
        return crossings_agree(g, h, gv, hv, map);
    }
    let v = order[i];
    for w in 0..h.vertices.len() {
        if used[w] || hv.classes[w] != gv.classes[v] || hv.depth[w] != gv.depth[v] {
            continue;
        }
        if gv.boundary_set(v) != hv.boundary_set(w) || gv.mult(v, v) != hv.mult(w, w) {
            continue;
        }
        let consistent = order[..i].iter().all(|&u| gv.mult(v, u) == hv.mult(w, map[u]));
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if search(g, h, gv, hv, order, i + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

fn crossings_agree(g: &Diagram, h: &Diagram, gv: &View, hv: &View, map: &[usize]) -> bool {
    let image = |e: End| match e {
        End::V(u) => End::V(map[u]),
        b => b,
    };
    for (v, kind) in g.vertices.iter().enumerate() {
        if let (VertexKind::Crossing(sg), VertexKind::Crossing(sh)) = (kind, h.vertices[map[v]]) {
            let shape = |pairs: [[usize; 2]; 2], f: &dyn Fn(usize) -> End| {
                let mut s: Vec<[End; 2]> = pairs
                    .iter()
                    .map(|p| {
                        let mut q = [f(p[0]), f(p[1])];
                        q.sort();
                        q
                    })
                    .collect();
                s.sort();
                s
            };
            let a = shape(sg.pairs(), &|p| image(gv.ends[v][p]));
            let b = shape(sh.pairs(), &|p| hv.ends[map[v]][p]);
            if a != b {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::super::{Dir, Strands};
    use super::*;

    #[test]
    fn relabelled_vertices_are_isomorphic() {
        let a = Diagram::from_parts(
            vec![VertexKind::Black(2), VertexKind::White(2)],
            vec![Dir::In, Dir::Out],
            vec![
                (Port::Boundary(0), Port::vertex(0, 0)),
                (Port::vertex(0, 1), Port::vertex(1, 1)),
                (Port::vertex(1, 0), Port::Boundary(1)),
            ],
            0,
        );
        let b = Diagram::from_parts(
            vec![VertexKind::White(2), VertexKind::Black(2)],
            vec![Dir::In, Dir::Out],
            vec![
                (Port::vertex(0, 1), Port::Boundary(1)),
                (Port::vertex(1, 1), Port::Boundary(0)),
                (Port::vertex(0, 0), Port::vertex(1, 0)),
            ],
            0,
        );
        assert!(a.is_isomorphic(&b));
        let swapped = b.permute_boundary(&[1, 0]).with_boundary_dirs(&[Dir::In, Dir::Out]);
        assert!(!a.is_isomorphic(&swapped));
    }

    #[test]
    fn crossing_strands_matter() {
        let x = |s: Strands| {
            Diagram::from_parts(
                vec![VertexKind::Crossing(s)],
                vec![Dir::Out; 4],
                (0..4).map(|i| (Port::Boundary(i), Port::vertex(0, i))).collect(),
                0,
            )
        };
        let a = x(Strands::new([0, 3], [1, 2]));
        assert!(a.is_isomorphic(&x(Strands::new([3, 0], [2, 1]))));
        assert!(!a.is_isomorphic(&x(Strands::new([0, 1], [2, 3]))));
    }
}
