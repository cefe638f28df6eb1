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

//! Seeded random diagrams and the normalization fuzz harness.
//!
//! Diagram `i` of a run with seed `s` is drawn from its own ChaCha stream,
//! so runs are reproducible and can be checked in parallel.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diagram::{Diagram, Dir, Port, Strands, VertexKind};
use crate::normal_form::{is_normal_form, nf_of_tensor, nf_to_diagram, normalize};
use crate::semantics::{eval, Ring};

/// Size bounds for generated diagrams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzBounds {
    pub max_vertices: usize,
    pub max_arity: usize,
    pub max_legs: usize,
    /// Allow crossing vertices.
    pub crossings: bool,
}

impl Default for FuzzBounds {
    fn default() -> Self {
        FuzzBounds { max_vertices: 10, max_arity: 4, max_legs: 6, crossings: true }
    }
}

/// The generator stream for diagram `index` of a run.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_kind(rng: &mut impl Rng, b: &FuzzBounds) -> VertexKind {
    let kinds = if b.crossings && b.max_arity >= 4 { 3 } else { 2 };
    match rng.gen_range(0..kinds) {
        0 => VertexKind::White(rng.gen_range(0..=b.max_arity)),
        1 => VertexKind::Black(rng.gen_range(0..=b.max_arity)),
        _ => {
            let partner = rng.gen_range(1..4);
            let rest: Vec<usize> = (1..4).filter(|&p| p != partner).collect();
            VertexKind::Crossing(Strands::new([0, partner], [rest[0], rest[1]]))
        }
    }
}

/// A random valid diagram: uniform vertex count and arities, a random
/// subset of ports of matching parity as boundary, a random matching of
/// the rest. Occasionally adds a bare wire or a closed circle.
pub fn random_diagram(rng: &mut impl Rng, b: &FuzzBounds) -> Diagram {
    let n = rng.gen_range(0..=b.max_vertices);
    let vertices: Vec<VertexKind> = (0..n).map(|_| random_kind(rng, b)).collect();
    let mut ports: Vec<Port> =
        vertices.iter().enumerate().flat_map(|(v, k)| (0..k.arity()).map(move |p| Port::vertex(v, p))).collect();
    let total = ports.len();
    let choices: Vec<usize> = (0..=b.max_legs.min(total)).filter(|l| (total - l).is_multiple_of(2)).collect();
    let legs = match choices.as_slice() {
        [] => {
            // odd port count and no legs allowed: draw a smaller diagram
            return random_diagram(rng, &FuzzBounds { max_vertices: n.saturating_sub(1), ..*b });
        }
        c => *c.choose(rng).unwrap(),
    };
    ports.shuffle(rng);
    let mut edges: Vec<(Port, Port)> = ports[..legs].iter().enumerate().map(|(k, &p)| (p, Port::Boundary(k))).collect();
    edges.extend(ports[legs..].chunks(2).map(|c| (c[0], c[1])));
    let mut legs = legs;
    if legs + 2 <= b.max_legs && rng.gen_bool(0.1) {
        edges.push((Port::Boundary(legs), Port::Boundary(legs + 1)));
        legs += 2;
    }
    let loops = usize::from(rng.gen_bool(0.1));
    let dirs: Vec<Dir> = (0..legs).map(|_| if rng.gen() { Dir::In } else { Dir::Out }).collect();
    Diagram::from_parts(vertices, dirs, edges, loops)
}

/// Outcome of one fuzz case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseResult {
    Ok,
    /// Normalization failed outright.
    Error(String),
    /// The output is not a normal-form template.
    NotNormal,
    /// The output differs from the template of the evaluated tensor.
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzReport {
    pub count: usize,
    pub results: Vec<CaseResult>,
}

impl FuzzReport {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| **r == CaseResult::Ok).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = (usize, &CaseResult)> {
        self.results.iter().enumerate().filter(|(_, r)| **r != CaseResult::Ok)
    }

    pub fn summary(&self) -> String {
        format!("{}/{} normalized, oracle-equal", self.passed(), self.count)
    }
}

/// Normalize `g` and compare against the template of its tensor.
pub fn check_case(g: &Diagram, ring: Ring) -> CaseResult {
    let out = match normalize(g, ring, false) {
        Ok((out, _)) => out,
        Err(e) => return CaseResult::Error(e.to_string()),
    };
    if is_normal_form(&out).is_none() {
        return CaseResult::NotNormal;
    }
    let psi = match eval(g, ring) {
        Ok(t) => t,
        Err(e) => return CaseResult::Error(e.to_string()),
    };
    let expect = nf_to_diagram(&nf_of_tensor(&psi, ring)).with_boundary_dirs(g.boundary());
    if out == expect {
        CaseResult::Ok
    } else {
        CaseResult::Mismatch
    }
}

/// Run `count` cases; results are indexed by case, independent of thread
/// scheduling.
pub fn run_fuzz(count: usize, seed: u64, bounds: &FuzzBounds, ring: Ring) -> FuzzReport {
    let results = (0..count)
        .into_par_iter()
        .map(|i| check_case(&random_diagram(&mut stream(seed, i as u64), bounds), ring))
        .collect();
    FuzzReport { count, results }
}
