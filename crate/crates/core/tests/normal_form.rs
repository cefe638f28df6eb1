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

use common::{diagram, random_nf, random_tensor, rng, small};
use zw_core::diagram::json::to_json;
use zw_core::fuzz::FuzzBounds;
use zw_core::normal_form::{
    deloop, eliminate_crossings, is_normal_form, negate_end, nf_of_tensor, nf_to_diagram, normalize, plug_normal_forms,
    reduce_mod, trace_ends,
};
use zw_core::semantics::{contract, generator_tensor};
use zw_core::{eval, Ring, VertexKind};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn negation_plugs_a_not_gate(seed in any::<u64>()) {
        let mut r = rng(seed);
        let legs = r.gen_range(1..=4);
        let nf = random_nf(&mut r, legs, 4);
        let j = r.gen_range(0..legs);
        // plug the NOT gate, then move its free leg back to position j
        let t = contract(&nf.to_tensor(), &generator_tensor(VertexKind::Black(2), Ring::Integers), &[(j, 0)], Ring::Integers);
        let order: Vec<usize> = (0..legs).map(|i| match i.cmp(&j) {
            std::cmp::Ordering::Less => i,
            std::cmp::Ordering::Equal => legs - 1,
            std::cmp::Ordering::Greater => i - 1,
        }).collect();
        prop_assert_eq!(negate_end(&nf, j).unwrap(), nf_of_tensor(&t.permute(&order), Ring::Integers));
    }

    #[test]
    fn trace_contracts_two_legs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let legs = r.gen_range(2..=5);
        let nf = random_nf(&mut r, legs, 4);
        let j = r.gen_range(0..legs);
        let k = (j + r.gen_range(1..legs)) % legs;
        let t = nf.to_tensor().trace(j, k, Ring::Integers);
        prop_assert_eq!(trace_ends(&nf, j, k).unwrap(), nf_of_tensor(&t, Ring::Integers));
    }

    #[test]
    fn plugging_contracts_along_wires(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (la, lb) = (r.gen_range(0..=4), r.gen_range(0..=4));
        let a = random_nf(&mut r, la, 3);
        let b = random_nf(&mut r, lb, 3);
        let mut ia: Vec<usize> = (0..la).collect();
        let mut ib: Vec<usize> = (0..lb).collect();
        rand::seq::SliceRandom::shuffle(ia.as_mut_slice(), &mut r);
        rand::seq::SliceRandom::shuffle(ib.as_mut_slice(), &mut r);
        let k = r.gen_range(0..=la.min(lb));
        let pairing: Vec<(usize, usize)> = ia.into_iter().zip(ib).take(k).collect();
        let t = contract(&a.to_tensor(), &b.to_tensor(), &pairing, Ring::Integers);
        prop_assert_eq!(plug_normal_forms(&a, &b, &pairing).unwrap(), nf_of_tensor(&t, Ring::Integers));
    }

    #[test]
    fn residues_match_the_quotient(seed in any::<u64>()) {
        let mut r = rng(seed);
        let legs = r.gen_range(0..=4);
        let nf = random_nf(&mut r, legs, 12);
        let n = [2u64, 3, 5, 7][r.gen_range(0..4)];
        prop_assert_eq!(reduce_mod(&nf, n).unwrap(), nf_of_tensor(&nf.to_tensor(), Ring::Mod(n)));
    }

    #[test]
    fn delooping_keeps_the_tensor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let legs = r.gen_range(0..=3);
        let nf = random_nf(&mut r, legs, 4);
        let d = deloop(&nf);
        prop_assert!(d.is_valid());
        prop_assert_eq!(eval(&d, Ring::Integers).unwrap(), nf.to_tensor());
    }

    #[test]
    fn templates_parse_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let legs = r.gen_range(0..=5);
        let nf = random_nf(&mut r, legs, 9);
        let d = nf_to_diagram(&nf);
        prop_assert!(d.is_valid(), "{}", d.validate());
        prop_assert_eq!(is_normal_form(&d), Some(nf));
    }

    #[test]
    fn templates_evaluate_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let legs = r.gen_range(1..=4);
        let psi = random_tensor(&mut r, legs, 3);
        prop_assert_eq!(eval(&nf_to_diagram(&nf_of_tensor(&psi, Ring::Integers)), Ring::Integers).unwrap(), psi);
    }

    #[test]
    fn crossings_are_eliminated(seed in any::<u64>()) {
        let g = diagram(seed, &FuzzBounds::default());
        let h = eliminate_crossings(&g);
        prop_assert_eq!(h.crossing_count(), 0);
        prop_assert_eq!(eval(&h, Ring::Integers).unwrap(), eval(&g, Ring::Integers).unwrap());
        if g.crossing_count() == 0 {
            prop_assert_eq!(h, g);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn trace_steps_preserve_the_tensor(seed in any::<u64>()) {
        let g = diagram(seed, &small());
        let ring = if seed % 2 == 0 { Ring::Integers } else { Ring::Mod(3) };
        let (out, trace) = normalize(&g, ring, true).unwrap();
        let trace = trace.unwrap();
        let mut prev = g.clone();
        for s in &trace.steps {
            prop_assert_eq!(&s.before, &prev, "steps chain");
            prop_assert_eq!(eval(&s.before, ring).unwrap(), eval(&s.after, ring).unwrap(), "step {}", s.step);
            prev = s.after.clone();
        }
        prop_assert_eq!(prev, out);
        if g.crossing_count() == 0 {
            prop_assert!(trace.steps.iter().all(|s| s.step != "7b" && s.step != "crossing-elim"));
        }
        prop_assert_eq!(trace.to_jsonl().lines().count(), trace.steps.len());
    }

    #[test]
    fn normalization_is_deterministic(seed in any::<u64>()) {
        let g = diagram(seed, &FuzzBounds::default());
        let a = normalize(&g, Ring::Integers, false).unwrap().0;
        let b = normalize(&g.clone(), Ring::Integers, false).unwrap().0;
        prop_assert_eq!(to_json(&a), to_json(&b));
    }
}

#[test]
fn mod_n_normal_forms_match_the_oracle() {
    for n in [2u64, 3, 5] {
        let report = zw_core::fuzz::run_fuzz(100, n, &FuzzBounds::default(), Ring::Mod(n));
        assert_eq!(report.passed(), 100, "mod {n}: {:?}", report.failures().collect::<Vec<_>>());
    }
}
