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

//! Rewrite rules: the fixed rules stored under `rules/`, the generated
//! schema families, a subgraph matcher and a semantic soundness check.

mod matcher;
pub mod schemas;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::json::{from_value, to_value, JsonError};
use crate::diagram::Diagram;
use crate::semantics::{eval_with, EvalError, EvalOptions, Ring, Strategy};

pub use matcher::{apply, find_matches, ApplyError, Match, MatchError};

/// A rewrite rule `lhs = rhs`. Boundary leg `k` of `lhs` corresponds to leg
/// `boundary_map[k]` of `rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub lhs: Diagram,
    pub rhs: Diagram,
    pub boundary_map: Vec<usize>,
    pub params: Vec<usize>,
    pub derived: bool,
    /// Modulus of the ring the rule belongs to, for the `or(n)` family.
    pub modulus: Option<u64>,
}

impl Rule {
    pub fn new(name: impl Into<String>, lhs: Diagram, rhs: Diagram) -> Rule {
        assert_eq!(lhs.num_legs(), rhs.num_legs(), "rule sides differ in arity");
        let legs = lhs.num_legs();
        Rule {
            name: name.into(),
            lhs,
            rhs,
            boundary_map: (0..legs).collect(),
            params: Vec::new(),
            derived: false,
            modulus: None,
        }
    }

    fn with_params(mut self, params: &[usize]) -> Rule {
        self.params = params.to_vec();
        self
    }

    fn derived(mut self) -> Rule {
        self.derived = true;
        self
    }

    /// The ring in which the rule is meant to hold.
    pub fn native_ring(&self) -> Ring {
        self.modulus.map_or(Ring::Integers, Ring::Mod)
    }

    pub fn to_json(&self) -> String {
        let file = RuleFile {
            name: self.name.clone(),
            lhs: to_value(&self.lhs),
            rhs: to_value(&self.rhs),
            boundary_map: self.boundary_map.clone(),
            params: self.params.clone(),
            derived: self.derived,
        };
        serde_json::to_string(&file).expect("rule serialization cannot fail")
    }

    pub fn from_json(src: &str) -> Result<Rule, RuleError> {
        let f: RuleFile = serde_json::from_str(src).map_err(JsonError::from)?;
        let lhs = from_value(f.lhs)?;
        let rhs = from_value(f.rhs)?;
        let legs = lhs.num_legs();
        let mut seen = vec![false; legs];
        let total = rhs.num_legs() == legs
            && f.boundary_map.len() == legs
            && f.boundary_map.iter().all(|&j| j < legs && !std::mem::replace(&mut seen[j], true));
        if !total {
            return Err(RuleError::BoundaryMap(f.name));
        }
        let modulus = parse_or(&f.name);
        Ok(Rule { name: f.name, lhs, rhs, boundary_map: f.boundary_map, params: f.params, derived: f.derived, modulus })
    }
}

fn parse_or(name: &str) -> Option<u64> {
    name.strip_prefix("or(")?.strip_suffix(')')?.parse().ok()
}

#[derive(Serialize, Deserialize)]
struct RuleFile {
    name: String,
    lhs: serde_json::Value,
    rhs: serde_json::Value,
    #[serde(rename = "boundaryMap")]
    boundary_map: Vec<usize>,
    #[serde(default)]
    params: Vec<usize>,
    #[serde(default)]
    derived: bool,
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("rule {0}: boundary map is not a bijection between the two sides")]
    BoundaryMap(String),
    #[error("max arity must be at least 2")]
    MaxArity,
}

macro_rules! fixed {
    ($($name:literal),* $(,)?) => {
        [$(($name, include_str!(concat!("../../rules/", $name, ".json")))),*]
    };
}

const FIXED: [(&str, &str); 24] = fixed!(
    "0a",
    "0b",
    "0c",
    "1a",
    "1b",
    "1c",
    "1d",
    "2a",
    "2b",
    "3a",
    "3b",
    "4",
    "5a",
    "5b",
    "5c",
    "5d",
    "6a",
    "6b",
    "6c",
    "7a",
    "7b",
    "X",
    "phase",
    "ba-braiding",
);

/// The fixed rules, in catalog order.
pub fn fixed_rules() -> Vec<Rule> {
    FIXED
        .iter()
        .map(|(name, src)| {
            let r = Rule::from_json(src).unwrap_or_else(|e| panic!("bundled rule {name}: {e}"));
            debug_assert_eq!(r.name, *name);
            r
        })
        .collect()
}

/// Look up a fixed rule by name.
pub fn fixed_rule(name: &str) -> Option<Rule> {
    FIXED.iter().find(|(n, _)| *n == name).map(|(_, src)| Rule::from_json(src).expect("bundled rule parses"))
}

/// Every fixed rule, every schema instance with parameters up to
/// `max_arity`, and `or(n)` when `modulus` is `Some(n)`.
pub fn catalog(max_arity: usize, modulus: Option<u64>) -> Result<Vec<Rule>, RuleError> {
    if max_arity < 2 {
        return Err(RuleError::MaxArity);
    }
    let k = max_arity;
    let mut out = fixed_rules();
    for n in 0..=k {
        for m in 0..=k {
            out.push(schemas::sp_w(n, m));
            out.push(schemas::sp_z(n, m));
        }
    }
    for n in 0..=k {
        out.push(schemas::tr_w(n));
        out.push(schemas::tr_z(n));
    }
    for n in 2..=k {
        out.push(schemas::ph(n));
    }
    for n in 1..=k {
        out.push(schemas::am_w(n));
        out.push(schemas::am_z(n));
    }
    for n in 0..=k {
        for m in 0..=k {
            out.push(schemas::ba_w(n, m));
        }
    }
    for n in 0..=k {
        for m in 1..=k {
            out.push(schemas::ba(n, m));
        }
    }
    for n in 1..=k {
        for m in 0..=n {
            out.push(schemas::lp_w(n, m));
        }
    }
    for n in 2..=k {
        out.push(schemas::lp(n));
    }
    if let Some(n) = modulus {
        out.push(schemas::or(n as usize));
    }
    Ok(out)
}

/// Whether both sides of `rule` have the same tensor over `ring`, legs
/// matched through the boundary map.
pub fn verify_soundness(rule: &Rule, ring: Ring) -> Result<bool, EvalError> {
    let opts =
        EvalOptions { leg_cap: rule.lhs.num_legs().max(crate::semantics::DEFAULT_LEG_CAP), strategy: Strategy::Greedy };
    let l = eval_with(&rule.lhs, ring, opts)?;
    let r = eval_with(&rule.rhs, ring, opts)?;
    Ok(l == r.permute(&rule.boundary_map))
}
