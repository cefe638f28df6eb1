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

//! JSON graph format.
//!
//! ```json
//! {"boundary":[{"dir":"out"}],
//!  "edges":[[["boundary",0],[0,0]]],
//!  "vertices":[{"arity":1,"id":0,"kind":"W"}]}
//! ```
//!
//! Vertex ids may be any distinct non-negative integers; they are renumbered
//! in order of appearance. Closed vertex-free circles go in an optional
//! `loops` count. Output is compact with sorted keys, so serializing a parsed
//! file written by [`to_json`] reproduces it byte for byte.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Diagram, Dir, Port, Strands, VertexKind};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid graph: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
pub(crate) struct GraphJson {
    boundary: Vec<BoundaryJson>,
    edges: Vec<[PortJson; 2]>,
    #[serde(default, skip_serializing_if = "is_zero")]
    loops: usize,
    vertices: Vec<VertexJson>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

#[derive(Serialize, Deserialize)]
struct BoundaryJson {
    dir: String,
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arity: Option<usize>,
    id: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    strands: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PortJson {
    Vertex(usize, usize),
    Boundary(String, usize),
}

impl GraphJson {
    pub(crate) fn from_diagram(g: &Diagram) -> Self {
        let port = |p: Port| match p {
            Port::Vertex { vertex, port } => PortJson::Vertex(vertex, port),
            Port::Boundary(k) => PortJson::Boundary("boundary".into(), k),
        };
        GraphJson {
            boundary: g
                .boundary
                .iter()
                .map(|d| BoundaryJson {
                    dir: match d {
                        Dir::In => "in".into(),
                        Dir::Out => "out".into(),
                    },
                })
                .collect(),
            edges: g.edges.iter().map(|&(a, b)| [port(a), port(b)]).collect(),
            loops: g.loops,
            vertices: g
                .vertices
                .iter()
                .enumerate()
                .map(|(id, k)| match k {
                    VertexKind::White(n) | VertexKind::Black(n) => {
                        VertexJson { arity: Some(*n), id, kind: k.tag().into(), strands: None }
                    }
                    VertexKind::Crossing(s) => VertexJson {
                        arity: None,
                        id,
                        kind: "X".into(),
                        strands: Some(s.pairs().iter().map(|p| p.to_vec()).collect()),
                    },
                })
                .collect(),
        }
    }

    pub(crate) fn into_diagram(self) -> Result<Diagram, JsonError> {
        let mut index = HashMap::new();
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            if index.insert(v.id, vertices.len()).is_some() {
                return Err(JsonError::Invalid(format!("duplicate vertex id {}", v.id)));
            }
            let kind = match (v.kind.as_str(), v.arity, &v.strands) {
                ("W", Some(n), None) => VertexKind::Black(n),
                ("Z", Some(n), None) => VertexKind::White(n),
                ("X", None | Some(4), Some(s)) => {
                    if s.len() != 2 || s.iter().any(|p| p.len() != 2) {
                        return Err(JsonError::Invalid(format!("vertex {}: strands must be two port pairs", v.id)));
                    }
                    VertexKind::Crossing(Strands::new([s[0][0], s[0][1]], [s[1][0], s[1][1]]))
                }
                ("X", Some(n), _) => {
                    return Err(JsonError::Invalid(format!("vertex {}: crossing must have 4 ports, got {n}", v.id)))
                }
                (k, _, _) => {
                    return Err(JsonError::Invalid(format!("vertex {}: bad kind/arity/strands for '{k}'", v.id)))
                }
            };
            vertices.push(kind);
        }
        let boundary = self
            .boundary
            .iter()
            .map(|b| match b.dir.as_str() {
                "in" => Ok(Dir::In),
                "out" => Ok(Dir::Out),
                other => Err(JsonError::Invalid(format!("boundary dir must be \"in\" or \"out\", got {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let port = |p: &PortJson| -> Result<Port, JsonError> {
            match p {
                PortJson::Vertex(id, port) => index
                    .get(id)
                    .map(|&v| Port::vertex(v, *port))
                    .ok_or_else(|| JsonError::Invalid(format!("edge refers to unknown vertex {id}"))),
                PortJson::Boundary(tag, k) if tag == "boundary" => Ok(Port::Boundary(*k)),
                PortJson::Boundary(tag, _) => Err(JsonError::Invalid(format!("unknown port tag {tag:?}"))),
            }
        };
        let edges = self.edges.iter().map(|[a, b]| Ok((port(a)?, port(b)?))).collect::<Result<Vec<_>, JsonError>>()?;
        Ok(Diagram::from_parts(vertices, boundary, edges, self.loops))
    }
}

pub fn to_json(g: &Diagram) -> String {
    serde_json::to_string(&GraphJson::from_diagram(g)).expect("graph serialization cannot fail")
}

pub fn to_value(g: &Diagram) -> serde_json::Value {
    serde_json::to_value(GraphJson::from_diagram(g)).expect("graph serialization cannot fail")
}

/// Parse the JSON graph format. Invariants are not checked here; run
/// [`Diagram::validate`] on the result.
pub fn from_json(src: &str) -> Result<Diagram, JsonError> {
    let g: GraphJson = serde_json::from_str(src)?;
    g.into_diagram()
}

pub fn from_value(v: serde_json::Value) -> Result<Diagram, JsonError> {
    let g: GraphJson = serde_json::from_value(v)?;
    g.into_diagram()
}

#[cfg(test)]
mod tests {
    use super::super::{from_term, parse_term};
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = from_term(&parse_term("(w(1,2) * x) ; (z(2,1) * id * id) ; (cup * id * id * id)").unwrap()).unwrap();
        let text = to_json(&g);
        let back = from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn accepts_sparse_ids() {
        let src = r#"{"vertices":[{"id":7,"kind":"W","arity":2}],
            "edges":[[[7,0],["boundary",0]],[["boundary",1],[7,1]]],
            "boundary":[{"dir":"in"},{"dir":"out"}]}"#;
        let g = from_json(src).unwrap();
        assert!(g.is_valid());
        assert_eq!(g.vertices(), &[VertexKind::Black(2)]);
    }

    #[test]
    fn rejects_three_port_crossing() {
        let src = r#"{"vertices":[{"id":0,"kind":"X","arity":3,"strands":[[0,1],[2,3]]}],"edges":[],"boundary":[]}"#;
        let err = from_json(src).unwrap_err();
        assert!(err.to_string().contains("crossing must have 4 ports"));
    }

    #[test]
    fn loops_survive() {
        let g = from_term(&parse_term("cup ; cap").unwrap()).unwrap();
        let text = to_json(&g);
        assert!(text.contains("\"loops\":1"));
        assert_eq!(from_json(&text).unwrap(), g);
    }
}
