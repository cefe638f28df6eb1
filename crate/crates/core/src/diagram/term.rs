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

//! The textual term language of the PROP.
//!
//! ```text
//! term  := seq
//! seq   := par (';' par)*        left to right = bottom to top
//! par   := atom ('*' atom)*      tensor product
//! atom  := 'id' | 'swap' | 'cup' | 'cap' | 'x'
//!        | 'w' '(' int ',' int ')' | 'z' '(' int ',' int ')'
//!        | '(' seq ')'
//! ```
//!
//! `w(n, m)` is a black vertex with `n` inputs and `m` outputs, `z(n, m)` a
//! white one, `x` the crossing.

use std::fmt;

use thiserror::Error;

use super::{Diagram, Dir, Port, Strands, VertexKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Id,
    Swap,
    Cup,
    Cap,
    Cross,
    W(usize, usize),
    Z(usize, usize),
    Seq(Box<Term>, Box<Term>),
    Tensor(Box<Term>, Box<Term>),
}

impl Term {
    pub fn seq(a: Term, b: Term) -> Term {
        Term::Seq(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Term, b: Term) -> Term {
        Term::Tensor(Box::new(a), Box::new(b))
    }

    /// `(inputs, outputs)`, or the first ill-typed composition.
    pub fn typing(&self) -> Result<(usize, usize), TermError> {
        Ok(match self {
            Term::Id => (1, 1),
            Term::Swap => (2, 2),
            Term::Cup => (0, 2),
            Term::Cap => (2, 0),
            Term::Cross => (2, 2),
            Term::W(n, m) | Term::Z(n, m) => (*n, *m),
            Term::Seq(a, b) => {
                let (ai, ao) = a.typing()?;
                let (bi, bo) = b.typing()?;
                if ao != bi {
                    return Err(TermError::TypeMismatch {
                        node: self.to_string(),
                        lower_outputs: ao,
                        upper_inputs: bi,
                    });
                }
                (ai, bo)
            }
            Term::Tensor(a, b) => {
                let (ai, ao) = a.typing()?;
                let (bi, bo) = b.typing()?;
                (ai + bi, ao + bo)
            }
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Id => f.write_str("id"),
            Term::Swap => f.write_str("swap"),
            Term::Cup => f.write_str("cup"),
            Term::Cap => f.write_str("cap"),
            Term::Cross => f.write_str("x"),
            Term::W(n, m) => write!(f, "w({n},{m})"),
            Term::Z(n, m) => write!(f, "z({n},{m})"),
            Term::Seq(a, b) => write!(f, "({a} ; {b})"),
            Term::Tensor(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("type mismatch in {node}: lower term has {lower_outputs} outputs, upper term has {upper_inputs} inputs")]
    TypeMismatch { node: String, lower_outputs: usize, upper_inputs: usize },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(usize),
    LParen,
    RParen,
    Comma,
    Semi,
    Star,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
        (line, column)
    }

    // Returns the token and its byte offset.
    fn next(&mut self) -> Result<(Tok, usize), TermError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if start >= bytes.len() {
            return Ok((Tok::End, start));
        }
        let c = bytes[start] as char;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '*' => Tok::Star,
            c if c.is_ascii_digit() => {
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                self.pos = end;
                let value = self.src[start..end].parse().map_err(|_| self.error(start, "integer too large"))?;
                return Ok((Tok::Int(value), start));
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = start;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                self.pos = end;
                return Ok((Tok::Ident(self.src[start..end].to_string()), start));
            }
            other => return Err(self.error(start, &format!("unexpected character '{other}'"))),
        };
        self.pos += 1;
        Ok((tok, start))
    }

    fn error(&self, offset: usize, message: &str) -> TermError {
        let (line, column) = self.position(offset);
        TermError::Syntax { line, column, message: message.to_string() }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, TermError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, at) = lexer.next()?;
        Ok(Parser { lexer, tok, at })
    }

    fn bump(&mut self) -> Result<(), TermError> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn fail<T>(&self, message: &str) -> Result<T, TermError> {
        Err(self.lexer.error(self.at, message))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), TermError> {
        if self.tok == tok {
            self.bump()
        } else {
            self.fail(&format!("expected {what}"))
        }
    }

    fn seq(&mut self) -> Result<Term, TermError> {
        let mut t = self.par()?;
        while self.tok == Tok::Semi {
            self.bump()?;
            t = Term::seq(t, self.par()?);
        }
        Ok(t)
    }

    fn par(&mut self) -> Result<Term, TermError> {
        let mut t = self.atom()?;
        while self.tok == Tok::Star {
            self.bump()?;
            t = Term::tensor(t, self.atom()?);
        }
        Ok(t)
    }

    fn int(&mut self) -> Result<usize, TermError> {
        match self.tok {
            Tok::Int(n) => {
                self.bump()?;
                Ok(n)
            }
            _ => self.fail("expected an integer"),
        }
    }

    fn atom(&mut self) -> Result<Term, TermError> {
        match self.tok.clone() {
            Tok::LParen => {
                self.bump()?;
                let t = self.seq()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Tok::Ident(name) => {
                let t = match name.as_str() {
                    "id" => Term::Id,
                    "swap" => Term::Swap,
                    "cup" => Term::Cup,
                    "cap" => Term::Cap,
                    "x" => Term::Cross,
                    "w" | "z" => {
                        self.bump()?;
                        self.expect(Tok::LParen, "'('")?;
                        let n = self.int()?;
                        self.expect(Tok::Comma, "','")?;
                        let m = self.int()?;
                        if self.tok != Tok::RParen {
                            return self.fail("expected ')'");
                        }
                        if name == "w" {
                            Term::W(n, m)
                        } else {
                            Term::Z(n, m)
                        }
                    }
                    _ => return self.fail(&format!("unknown generator '{name}'")),
                };
                self.bump()?;
                Ok(t)
            }
            Tok::End => self.fail("unexpected end of input"),
            _ => self.fail("expected a generator or '('"),
        }
    }
}

/// Parse a term. Errors carry 1-based line and column.
pub fn parse_term(src: &str) -> Result<Term, TermError> {
    let mut p = Parser::new(src)?;
    let t = p.seq()?;
    if p.tok != Tok::End {
        return p.fail("unexpected trailing input");
    }
    Ok(t)
}

/// Build the diagram of a well-typed term. The boundary lists the inputs,
/// then the outputs.
pub fn from_term(term: &Term) -> Result<Diagram, TermError> {
    term.typing()?;
    Ok(build(term))
}

/// Write `g` as a term: all vertices as states, cups for output-to-output
/// wires, a layer of swaps, then caps. `None` when no term denotes `g`,
/// that is when an input follows an output on the boundary or `g` is the
/// empty diagram.
pub fn to_term(g: &Diagram) -> Option<Term> {
    let dirs = g.boundary();
    let inputs = dirs.iter().take_while(|d| **d == Dir::In).count();
    if dirs[inputs..].contains(&Dir::In) {
        return None;
    }
    let partner = g.partner_map();
    let mut ends: Vec<Port> = (0..inputs).map(Port::Boundary).collect();
    let mut states: Vec<Term> = vec![Term::Id; inputs];
    for (v, kind) in g.vertices().iter().enumerate() {
        let p = |k: usize| Port::vertex(v, k);
        match *kind {
            VertexKind::Black(n) => {
                states.push(Term::W(0, n));
                ends.extend((0..n).map(p));
            }
            VertexKind::White(n) => {
                states.push(Term::Z(0, n));
                ends.extend((0..n).map(p));
            }
            VertexKind::Crossing(s) => {
                // (cup * cup) ; (id * x * id) puts crossing ports 0, 2, 3, 1
                // on its four outputs
                let [a, b] = s.pairs();
                let bent = Term::seq(
                    Term::tensor(Term::Cup, Term::Cup),
                    Term::tensor(Term::tensor(Term::Id, Term::Cross), Term::Id),
                );
                states.push(bent);
                ends.extend([p(a[0]), p(b[1]), p(a[1]), p(b[0])]);
            }
        }
    }
    states.extend((0..g.loops()).map(|_| Term::seq(Term::Cup, Term::Cap)));
    let wires = ends.len();
    let mut cups = vec![Term::Id; wires];
    for &(a, b) in g.edges() {
        if let (Port::Boundary(x), Port::Boundary(y)) = (a, b) {
            if x >= inputs && y >= inputs {
                cups.push(Term::Cup);
                ends.extend([a, b]);
            }
        }
    }
    let has_cups = ends.len() > wires;

    // every wire goes to an output slot or to a cap next to its partner
    let outputs = dirs.len() - inputs;
    let output_of = |e: Port| match e {
        Port::Boundary(k) if k >= inputs => Some(k - inputs),
        _ => match partner[&e] {
            Port::Boundary(k) if k >= inputs => Some(k - inputs),
            _ => None,
        },
    };
    let index: std::collections::HashMap<Port, usize> = ends.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut target = vec![usize::MAX; ends.len()];
    let mut next = outputs;
    for (i, &e) in ends.iter().enumerate() {
        if let Some(k) = output_of(e) {
            target[i] = k;
        } else if target[i] == usize::MAX {
            let j = index[&partner[&e]];
            target[i] = next;
            target[j] = next + 1;
            next += 2;
        }
    }
    let caps = (ends.len() - outputs) / 2;

    let mut layers: Vec<Term> = Vec::new();
    layers.extend(tensor_all(states));
    if has_cups {
        layers.extend(tensor_all(cups));
    }
    // odd-even transposition sort, one layer of disjoint swaps per round
    let n = ends.len();
    for round in 0..n {
        let mut row = Vec::new();
        let mut i = 0;
        let mut swapped = false;
        while i < n {
            if i % 2 == round % 2 && i + 1 < n && target[i] > target[i + 1] {
                target.swap(i, i + 1);
                row.push(Term::Swap);
                swapped = true;
                i += 2;
            } else {
                row.push(Term::Id);
                i += 1;
            }
        }
        if swapped {
            layers.extend(tensor_all(row));
        }
    }
    debug_assert!(target.windows(2).all(|w| w[0] < w[1]));
    if caps > 0 {
        let row = std::iter::repeat_n(Term::Id, outputs).chain(std::iter::repeat_n(Term::Cap, caps));
        layers.extend(tensor_all(row.collect()));
    }
    layers.into_iter().reduce(Term::seq)
}

fn tensor_all(parts: Vec<Term>) -> Option<Term> {
    parts.into_iter().reduce(Term::tensor)
}

fn io_boundary(n: usize, m: usize) -> Vec<Dir> {
    let mut b = vec![Dir::In; n];
    b.extend(std::iter::repeat_n(Dir::Out, m));
    b
}

fn build(term: &Term) -> Diagram {
    match term {
        Term::Id => Diagram::wire(Dir::In, Dir::Out),
        Term::Cup => Diagram::wire(Dir::Out, Dir::Out),
        Term::Cap => Diagram::wire(Dir::In, Dir::In),
        Term::Swap => Diagram::from_parts(
            vec![],
            io_boundary(2, 2),
            vec![(Port::Boundary(0), Port::Boundary(3)), (Port::Boundary(1), Port::Boundary(2))],
            0,
        ),
        Term::Cross => {
            Diagram::single(VertexKind::Crossing(Strands::standard())).with_boundary_dirs(&io_boundary(2, 2))
        }
        Term::W(n, m) => Diagram::single(VertexKind::Black(n + m)).with_boundary_dirs(&io_boundary(*n, *m)),
        Term::Z(n, m) => Diagram::single(VertexKind::White(n + m)).with_boundary_dirs(&io_boundary(*n, *m)),
        Term::Seq(a, b) => {
            let (ai, ao) = a.typing().expect("typed");
            let (lower, upper) = (build(a), build(b));
            let pairing: Vec<(usize, usize)> = (0..ao).map(|k| (ai + k, k)).collect();
            lower.plug(&upper, &pairing).expect("typed composition")
        }
        Term::Tensor(a, b) => {
            let (ai, ao) = a.typing().expect("typed");
            let (bi, bo) = b.typing().expect("typed");
            let j = build(a).juxtapose(&build(b));
            // a_in, a_out, b_in, b_out  ->  a_in, b_in, a_out, b_out
            let order: Vec<usize> = (0..ai)
                .chain(ai + ao..ai + ao + bi)
                .chain(ai..ai + ao)
                .chain(ai + ao + bi..ai + ao + bi + bo)
                .collect();
            j.permute_boundary(&order)
        }
    }
}
