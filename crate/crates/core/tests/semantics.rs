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

mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{brute_eval, diagram, rng, small};
use zw_core::fuzz::FuzzBounds;
use zw_core::semantics::{contract, eval_with, generator_tensor, EvalOptions, Strategy};
use zw_core::{eval, Ring, Strands, VertexKind};

fn weights(t: &zw_core::Tensor) -> Vec<u32> {
    t.entries().map(|(b, _)| b.count_ones()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn contraction_order_does_not_matter(seed in any::<u64>()) {
        let g = diagram(seed, &small());
        let greedy = eval_with(&g, Ring::Integers, EvalOptions { strategy: Strategy::Greedy, ..Default::default() }).unwrap();
        let seq = eval_with(&g, Ring::Integers, EvalOptions { strategy: Strategy::Sequential, ..Default::default() }).unwrap();
        prop_assert_eq!(&greedy, &seq);
        prop_assert_eq!(greedy, brute_eval(&g));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eval_is_functorial(seed in any::<u64>()) {
        let b = FuzzBounds { max_vertices: 3, ..small() };
        let g = diagram(seed, &b);
        let h = diagram(seed.wrapping_add(1), &b);
        let mut r = rng(seed);
        let k = r.gen_range(0..=g.num_legs().min(h.num_legs()));
        let mut gi: Vec<usize> = (0..g.num_legs()).collect();
        let mut hi: Vec<usize> = (0..h.num_legs()).collect();
        rand::seq::SliceRandom::shuffle(gi.as_mut_slice(), &mut r);
        rand::seq::SliceRandom::shuffle(hi.as_mut_slice(), &mut r);
        let pairing: Vec<(usize, usize)> = gi.into_iter().zip(hi).take(k).collect();
        let plugged = g.plug(&h, &pairing).unwrap();
        let lhs = eval(&plugged, Ring::Integers).unwrap();
        let rhs = contract(&eval(&g, Ring::Integers).unwrap(), &eval(&h, Ring::Integers).unwrap(), &pairing, Ring::Integers);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_mod_n_commutes_with_eval(seed in any::<u64>()) {
        let g = diagram(seed, &FuzzBounds::default());
        let z = eval(&g, Ring::Integers).unwrap();
        for n in [2, 3, 5] {
            prop_assert_eq!(eval(&g, Ring::Mod(n)).unwrap(), z.reduce(Ring::Mod(n)));
        }
    }
}

#[test]
fn black_vertices_are_odd_and_wiring_is_even() {
    for n in 0..=6 {
        let t = generator_tensor(VertexKind::Black(n), Ring::Integers);
        assert!(weights(&t).iter().all(|w| w % 2 == 1), "Black({n})");
    }
    for s in [Strands::standard(), Strands::new([0, 1], [2, 3]), Strands::new([0, 2], [1, 3])] {
        let t = generator_tensor(VertexKind::Crossing(s), Ring::Integers);
        assert!(weights(&t).iter().all(|w| w % 2 == 0));
    }
    let cup = eval(&common::term("cup"), Ring::Integers).unwrap();
    assert!(weights(&cup).iter().all(|w| w % 2 == 0));
    // the ternary white vertex mixes parities
    let w3 = weights(&generator_tensor(VertexKind::White(3), Ring::Integers));
    assert!(w3.iter().any(|w| w % 2 == 0) && w3.iter().any(|w| w % 2 == 1));
}

#[test]
fn known_values() {
    assert_eq!(eval(&common::term("cup;cap"), Ring::Integers).unwrap().to_text(), "- 2\n");
    assert_eq!(eval(&common::term("w(0,0)"), Ring::Integers).unwrap().to_text(), "");
    assert_eq!(eval(&common::term("w(1,1)"), Ring::Integers).unwrap().to_text(), "01 1\n10 1\n");
    assert_eq!(eval(&common::term("z(1,1)"), Ring::Integers).unwrap().to_text(), "00 1\n11 -1\n");
}
