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

//! Exact interpretation of diagrams as tensors over `Z` or `Z/n`.
//!
//! Every leg is a copy of `Z ⊕ Z` with basis `|0>, |1>`, and wires contract
//! with the self-dual metric `|00> + |11>`. The generators are:
//!
//! | vertex      | tensor (all legs out)                                  |
//! |-------------|--------------------------------------------------------|
//! | `Black(n)`  | `|10…0> + |01…0> + … + |0…01>` (zero when `n = 0`)     |
//! | `White(n)`  | `|0…0> − |1…1>` (zero when `n = 0`)                    |
//! | `Crossing`  | identity along each strand, `−1` when both carry `|1>` |

mod eval;
mod tensor;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

pub use eval::{contract, eval, eval_with, generator_tensor, EvalError, EvalOptions, Strategy, DEFAULT_LEG_CAP};
pub use tensor::{tensor_equal, Tensor, TensorParseError};

/// Coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    /// Integers modulo `n`, `n >= 1`; values are kept in `[0, n)`.
    Mod(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("modulus must be at least 1")]
pub struct BadModulus;

impl Ring {
    pub fn modulo(n: u64) -> Result<Ring, BadModulus> {
        if n == 0 {
            Err(BadModulus)
        } else {
            Ok(Ring::Mod(n))
        }
    }

    /// Canonical representative of `c`.
    pub fn reduce(&self, c: BigInt) -> BigInt {
        match self {
            Ring::Integers => c,
            Ring::Mod(n) => c.mod_floor(&BigInt::from(*n)),
        }
    }

    pub fn one(&self) -> BigInt {
        self.reduce(BigInt::one())
    }

    pub fn minus_one(&self) -> BigInt {
        self.reduce(-BigInt::one())
    }

    pub fn is_zero(&self, c: &BigInt) -> bool {
        self.reduce(c.clone()).is_zero()
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => f.write_str("Z"),
            Ring::Mod(n) => write!(f, "Z/{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_are_canonical() {
        let r = Ring::Mod(3);
        assert_eq!(r.reduce(BigInt::from(-1)), BigInt::from(2));
        assert_eq!(r.reduce(BigInt::from(7)), BigInt::from(1));
        assert_eq!(Ring::Mod(1).one(), BigInt::zero());
        assert_eq!(Ring::Integers.minus_one(), BigInt::from(-1));
        assert_eq!(Ring::modulo(0), Err(BadModulus));
    }
}
