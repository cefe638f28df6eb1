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

// Normalization as a fold: crossings are eliminated first, then vertices
// are absorbed one at a time into an accumulated normal form by plugging
// their generator normal forms along the wires they share with it.
//
// Every open leg of the accumulator is labelled by the wire of the
// crossing-free diagram it stands for; a wire is traced away once both of
// its ends are in the accumulator.

use std::collections::HashSet;

use num_bigint::BigInt;
use serde_json::json;
use thiserror::Error;

use super::lemmas::{cup_nf, generator_nf, plug_normal_forms, reduce_mod, trace_ends};
use super::template::nf_to_diagram;
use super::{NfError, NormalForm};
use crate::diagram::json::to_value;
use crate::diagram::{Diagram, Dir, Port, ValidationReport, VertexKind};
use crate::semantics::{Ring, DEFAULT_LEG_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: String,
    pub before: Diagram,
    pub after: Diagram,
}

/// Audit log of a normalization. Consecutive steps chain: each `before`
/// is the previous `after`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<TraceStep>,
}

impl RewriteTrace {
    fn push(&mut self, step: &str, before: Diagram, after: Diagram) {
        self.steps.push(TraceStep { step: step.to_string(), before, after });
    }

    /// One `{"step", "before", "after"}` object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let line = json!({"after": to_value(&s.after), "before": to_value(&s.before), "step": s.step});
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("diagram has {legs} boundary legs, above the cap of {cap}")]
    LegCap { legs: usize, cap: usize },
    #[error("invalid diagram: {0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Resource(#[from] NfError),
}

/// Replace every crossing by a crossing-free diagram with the same tensor.
///
/// A crossing whose two strands are joined by exactly one wire is a
/// self-crossed wire and becomes a binary white vertex; any other crossing
/// is replaced by the template of its normal form. Crossing-free input is
/// returned unchanged.
pub fn eliminate_crossings(g: &Diagram) -> Diagram {
    eliminate(g, None)
}

fn eliminate(g: &Diagram, mut trace: Option<&mut RewriteTrace>) -> Diagram {
    let mut cur = g.clone();
    while let Some(c) = cur.vertices().iter().position(VertexKind::is_crossing) {
        let VertexKind::Crossing(s) = cur.vertex(c) else { unreachable!() };
        let [a, b] = s.pairs();
        let partner = cur.partner_map();
        let far = |p: usize| partner[&Port::vertex(c, p)];
        let joins = |x: usize, ys: [usize; 2]| ys.iter().any(|&y| far(x) == Port::vertex(c, y));
        let across: Vec<(usize, usize)> = a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| (x, y)))
            .filter(|&(x, y)| far(x) == Port::vertex(c, y))
            .collect();
        let within = joins(a[0], a) || joins(b[0], b);
        let next = match across.as_slice() {
            [(x, y)] if !within => {
                let ra = if a[0] == *x { a[1] } else { a[0] };
                let rb = if b[0] == *y { b[1] } else { b[0] };
                let sign = Diagram::single(VertexKind::White(2));
                cur.substitute(&[c], &sign, &[Port::vertex(c, ra), Port::vertex(c, rb)])
            }
            _ => {
                let repl = nf_to_diagram(&generator_nf(cur.vertex(c)));
                let attach: Vec<Port> = (0..4).map(|p| Port::vertex(c, p)).collect();
                cur.substitute(&[c], &repl, &attach)
            }
        };
        if let Some(t) = trace.as_deref_mut() {
            t.push("crossing-elim", cur.clone(), next.clone());
        }
        cur = next;
    }
    cur
}

pub fn normalize(g: &Diagram, ring: Ring, want_trace: bool) -> Result<(Diagram, Option<RewriteTrace>), NormalizeError> {
    normalize_with(g, ring, want_trace, DEFAULT_LEG_CAP)
}

/// Normalize `g`; the result is the template of the normal form of its
/// tensor, carrying `g`'s boundary directions.
pub fn normalize_with(
    g: &Diagram,
    ring: Ring,
    want_trace: bool,
    leg_cap: usize,
) -> Result<(Diagram, Option<RewriteTrace>), NormalizeError> {
    let mut trace = want_trace.then(RewriteTrace::default);
    let nf = fold(g, ring, leg_cap, trace.as_mut())?;
    let out = nf_to_diagram(&nf).with_boundary_dirs(g.boundary());
    if let Some(t) = trace.as_mut() {
        let last = t.steps.last().map_or_else(|| g.clone(), |s| s.after.clone());
        if last != out {
            t.push("plugging", last, out.clone());
        }
    }
    Ok((out, trace))
}

/// The normal form reached by [`normalize`].
pub fn normalize_to_nf(g: &Diagram, ring: Ring, leg_cap: usize) -> Result<NormalForm, NormalizeError> {
    fold(g, ring, leg_cap, None)
}

struct Labels {
    // wire label of every vertex port, and of every boundary port
    port: Vec<Vec<usize>>,
    boundary: Vec<usize>,
}

fn label(h: &Diagram) -> Labels {
    let e = h.edges().len();
    let mut port: Vec<Vec<usize>> = h.vertices().iter().map(|k| vec![usize::MAX; k.arity()]).collect();
    let mut boundary = vec![usize::MAX; h.num_legs()];
    for (i, &(a, b)) in h.edges().iter().enumerate() {
        // a bare wire gets two labels, one per end
        let bare = matches!((a, b), (Port::Boundary(_), Port::Boundary(_)));
        for (x, l) in [(a, i), (b, if bare { e + i } else { i })] {
            match x {
                Port::Vertex { vertex, port: p } => port[vertex][p] = l,
                Port::Boundary(k) => boundary[k] = l,
            }
        }
    }
    Labels { port, boundary }
}

struct Block<'a> {
    nf: &'a NormalForm,
    labels: &'a [usize],
}

/// The current state of the fold as a diagram: the accumulated templates
/// plugged into what is left of `h`, boundary in `h`'s order.
fn snapshot(h: &Diagram, lab: &Labels, blocks: &[Block], remaining: &[usize]) -> Diagram {
    // a unit accumulator is the empty diagram
    let unit = NormalForm::scalar(1);
    let mut pieces: Vec<(Diagram, Vec<usize>)> =
        blocks.iter().filter(|b| *b.nf != unit).map(|b| (nf_to_diagram(b.nf), b.labels.to_vec())).collect();
    if !remaining.is_empty() {
        let (d, cut) = h.induced(remaining);
        let labels = cut
            .iter()
            .map(|p| match *p {
                Port::Vertex { vertex, port } => lab.port[vertex][port],
                Port::Boundary(_) => unreachable!("cut ports are vertex ports"),
            })
            .collect();
        pieces.push((d, labels));
    }
    let mut d = Diagram::empty();
    let mut open: Vec<usize> = Vec::new();
    for (piece, labels) in pieces {
        let pairing: Vec<(usize, usize)> =
            open.iter().enumerate().filter_map(|(i, l)| labels.iter().position(|m| m == l).map(|j| (i, j))).collect();
        d = d.plug(&piece, &pairing).expect("labels pair up");
        let (ps, qs): (HashSet<usize>, HashSet<usize>) = pairing.iter().copied().unzip();
        open = open
            .iter()
            .enumerate()
            .filter(|(i, _)| !ps.contains(i))
            .map(|(_, l)| *l)
            .chain(labels.iter().enumerate().filter(|(j, _)| !qs.contains(j)).map(|(_, l)| *l))
            .collect();
    }
    // a label seen twice closes a wire inside one piece
    while let Some((i, j)) = duplicate(&open) {
        d = d.plug(&Diagram::wire(Dir::In, Dir::In), &[(i, 0), (j, 1)]).expect("cap fits");
        open.remove(j);
        open.remove(i);
    }
    let order: Vec<usize> =
        lab.boundary.iter().map(|l| open.iter().position(|m| m == l).expect("boundary label is open")).collect();
    d.permute_boundary(&order).with_boundary_dirs(h.boundary())
}

fn duplicate(labels: &[usize]) -> Option<(usize, usize)> {
    (0..labels.len()).find_map(|i| (i + 1..labels.len()).find(|&j| labels[j] == labels[i]).map(|j| (i, j)))
}

fn fold(
    g: &Diagram,
    ring: Ring,
    leg_cap: usize,
    mut trace: Option<&mut RewriteTrace>,
) -> Result<NormalForm, NormalizeError> {
    if g.num_legs() > leg_cap {
        return Err(NormalizeError::LegCap { legs: g.num_legs(), cap: leg_cap });
    }
    let report = g.validate();
    if !report.is_empty() {
        return Err(NormalizeError::Invalid(report));
    }
    let h = eliminate(g, trace.as_deref_mut());
    let lab = label(&h);
    let n = h.num_vertices();
    let all: Vec<usize> = (0..n).collect();

    // closed circles and bare wires first
    let mut acc = NormalForm::scalar(BigInt::from(2u8).pow(h.loops() as u32));
    let mut acc_labels: Vec<usize> = Vec::new();
    for (i, &(a, b)) in h.edges().iter().enumerate() {
        if let (Port::Boundary(x), Port::Boundary(y)) = (a, b) {
            acc = plug_normal_forms(&acc, &cup_nf(), &[])?;
            acc_labels.extend([lab.boundary[x], lab.boundary[y]]);
            debug_assert_eq!(lab.boundary[x], i);
        }
    }
    let snap = |acc: &NormalForm, labels: &[usize], extra: Option<Block>, remaining: &[usize]| {
        let mut blocks = vec![Block { nf: acc, labels }];
        blocks.extend(extra);
        snapshot(&h, &lab, &blocks, remaining)
    };
    if let Some(t) = trace.as_deref_mut() {
        if h.loops() > 0 || !acc_labels.is_empty() {
            t.push("plugging", h.clone(), snap(&acc, &acc_labels, None, &all));
        }
    }

    let mut done = vec![false; n];
    for _ in 0..n {
        let v = next_vertex(&h, &lab, &done, &acc_labels);
        done[v] = true;
        let kind = h.vertex(v);
        let gen = generator_nf(kind);
        let gen_labels = &lab.port[v];
        let remaining: Vec<usize> = (0..n).filter(|&u| !done[u]).collect();
        let mut before = None;
        if let Some(t) = trace.as_deref_mut() {
            // the first step starts from the crossing-free input itself
            let b = t.steps.last().map_or_else(|| h.clone(), |s| s.after.clone());
            let a = snap(&acc, &acc_labels, Some(Block { nf: &gen, labels: gen_labels }), &remaining);
            t.push("generator-nf", b, a.clone());
            before = Some(a);
        }

        let pairing: Vec<(usize, usize)> = acc_labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| gen_labels.iter().position(|m| m == l).map(|j| (i, j)))
            .collect();
        acc = plug_normal_forms(&acc, &gen, &pairing)?;
        let (ps, qs): (HashSet<usize>, HashSet<usize>) = pairing.iter().copied().unzip();
        acc_labels = acc_labels
            .iter()
            .enumerate()
            .filter(|(i, _)| !ps.contains(i))
            .map(|(_, l)| *l)
            .chain(gen_labels.iter().enumerate().filter(|(j, _)| !qs.contains(j)).map(|(_, l)| *l))
            .collect();
        // self-loops of v
        while let Some((i, j)) = duplicate(&acc_labels) {
            acc = trace_ends(&acc, i, j)?;
            acc_labels.remove(j);
            acc_labels.remove(i);
        }
        if let (Some(t), Some(b)) = (trace.as_deref_mut(), before) {
            t.push("plugging", b, snap(&acc, &acc_labels, None, &remaining));
        }
    }

    let order: Vec<usize> =
        lab.boundary.iter().map(|l| acc_labels.iter().position(|m| m == l).expect("boundary label is open")).collect();
    let nf = acc.permute(&order);
    if let Some(t) = trace.as_deref_mut() {
        let last = t.steps.last().map_or_else(|| g.clone(), |s| s.after.clone());
        let arranged = nf_to_diagram(&nf).with_boundary_dirs(g.boundary());
        if last != arranged {
            t.push("plugging", last, arranged);
        }
    }
    match ring {
        Ring::Integers => Ok(nf),
        Ring::Mod(m) => {
            let reduced = reduce_mod(&nf, m)?;
            if let Some(t) = trace {
                if reduced != nf {
                    t.push(
                        &format!("or({m})"),
                        nf_to_diagram(&nf).with_boundary_dirs(g.boundary()),
                        nf_to_diagram(&reduced).with_boundary_dirs(g.boundary()),
                    );
                }
            }
            Ok(reduced)
        }
    }
}

/// The unabsorbed vertex that leaves the accumulator with the fewest open
/// legs; lowest index on ties.
fn next_vertex(h: &Diagram, lab: &Labels, done: &[bool], acc_labels: &[usize]) -> usize {
    let open: HashSet<usize> = acc_labels.iter().copied().collect();
    (0..h.num_vertices())
        .filter(|&v| !done[v])
        .min_by_key(|&v| {
            let labels = &lab.port[v];
            let shared = labels.iter().filter(|l| open.contains(l)).count();
            let mut seen = HashSet::new();
            let self_loops = labels.iter().filter(|l| !seen.insert(**l)).count();
            (acc_labels.len() + labels.len() - 2 * shared - 2 * self_loops, v)
        })
        .expect("a vertex remains")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{from_term, parse_term};
    use crate::normal_form::{is_normal_form, nf_of_tensor};
    use crate::semantics::eval;

    fn term(src: &str) -> Diagram {
        from_term(&parse_term(src).unwrap()).unwrap()
    }

    fn check(src: &str, ring: Ring) {
        let g = term(src);
        let (out, trace) = normalize(&g, ring, true).unwrap();
        let psi = eval(&g, ring).unwrap();
        let expect = nf_to_diagram(&nf_of_tensor(&psi, ring)).with_boundary_dirs(g.boundary());
        assert_eq!(out, expect, "{src}");
        assert!(is_normal_form(&out).is_some());
        let trace = trace.unwrap();
        for (i, s) in trace.steps.iter().enumerate() {
            assert_eq!(eval(&s.before, ring).unwrap(), eval(&s.after, ring).unwrap(), "{src}: step {i} {}", s.step);
            if i > 0 {
                assert_eq!(s.before, trace.steps[i - 1].after, "{src}: chain broken at {i}");
            }
        }
        if let Some(first) = trace.steps.first() {
            assert_eq!(first.before, g);
        }
        if let Some(last) = trace.steps.last() {
            assert_eq!(last.after, out);
        }
    }

    #[test]
    fn small_terms_normalize() {
        for src in [
            "z(1,1);z(1,1)",
            "w(0,3)",
            "(cup*id);(id*cap)",
            "cup;cap",
            "x",
            "w(1,2);(id*z(1,1));x",
            "swap",
            "w(0,0)",
            "z(0,2);(w(1,1)*id)",
        ] {
            check(src, Ring::Integers);
            check(src, Ring::Mod(3));
        }
    }

    #[test]
    fn involution_gives_the_wire() {
        let (out, _) = normalize(&term("z(1,1);z(1,1)"), Ring::Integers, false).unwrap();
        let (wire, _) = normalize(&term("id"), Ring::Integers, false).unwrap();
        assert_eq!(out, wire);
    }

    #[test]
    fn self_crossed_wire_becomes_white() {
        // a crossing with ports 1 and 2 joined: strand A is 0-3, strand B 1-2,
        // so join 3 to 2 instead
        let c = crate::diagram::Strands::standard();
        let g = Diagram::from_parts(
            vec![VertexKind::Crossing(c)],
            vec![Dir::In, Dir::Out],
            vec![
                (Port::Boundary(0), Port::vertex(0, 0)),
                (Port::vertex(0, 3), Port::vertex(0, 2)),
                (Port::vertex(0, 1), Port::Boundary(1)),
            ],
            0,
        );
        let h = eliminate_crossings(&g);
        assert_eq!(h.vertices(), &[VertexKind::White(2)]);
        assert_eq!(eval(&h, Ring::Integers).unwrap(), eval(&g, Ring::Integers).unwrap());
    }

    #[test]
    fn crossing_free_input_is_untouched() {
        let g = term("w(1,2);(z(1,1)*id)");
        assert_eq!(eliminate_crossings(&g), g);
        let (_, t) = normalize(&g, Ring::Integers, true).unwrap();
        assert!(t.unwrap().steps.iter().all(|s| s.step != "crossing-elim" && s.step != "7b"));
    }
}
