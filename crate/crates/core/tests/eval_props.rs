mod common;

use apf_core::{
    ast::substitute,
    canon::canon_formula,
    eval::{brute_force_eval, eval_body_at, eval_formula_with_points, eval_over_domain},
    eval_formula, is_in_fragment, Formula, Term,
};
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample(seed: u64) -> (apf_core::Model, Formula, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_model(&mut rng);
    let f = fragment_formula(&mut rng, 2);
    (m, f, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generated_formulas_are_members(seed in any::<u64>()) {
        let (_, f, _) = sample(seed);
        let v = is_in_fragment(&f);
        prop_assert!(v.member(), "{f}: {v}");
    }

    #[test]
    fn instantiation_matches_brute_force(seed in any::<u64>()) {
        let (m, f, _) = sample(seed);
        prop_assert_eq!(eval_formula(&m, &f).unwrap(), brute_force_eval(&m, &f, 50).unwrap(), "{}", f);
    }

    #[test]
    fn extra_points_change_nothing(seed in any::<u64>()) {
        let (m, f, mut rng) = sample(seed);
        let extra: Vec<BigInt> = (0..rng.gen_range(1..6)).map(|_| big(rng.gen_range(-60..=60))).collect();
        prop_assert_eq!(eval_formula(&m, &f).unwrap(), eval_formula_with_points(&m, &f, &extra).unwrap());
    }

    #[test]
    fn canonical_form_keeps_truth_and_membership(seed in any::<u64>()) {
        let (m, f, _) = sample(seed);
        let c = canon_formula(&f);
        prop_assert!(is_in_fragment(&c).member(), "{} -> {}", f, c);
        prop_assert_eq!(eval_formula(&m, &f).unwrap(), eval_formula(&m, &c).unwrap(), "{} -> {}", f, c);
        prop_assert_eq!(canon_formula(&c), c);
    }

    #[test]
    fn instances_agree_with_substitution(seed in any::<u64>(), v in -30i64..=30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng);
        let Formula::Forall(vars, body) = property(&mut rng) else { unreachable!() };
        let mut inst = (*body).clone();
        for x in &vars {
            inst = substitute(&inst, x, &Term::int(v)).unwrap();
        }
        let values = vec![big(v); vars.len()];
        prop_assert_eq!(
            eval_body_at(&m, &vars, &body, &values).unwrap(),
            eval_over_domain(&m, &inst, &[]).unwrap()
        );
    }

    #[test]
    fn true_properties_hold_everywhere(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng);
        let p = property(&mut rng);
        let Formula::Forall(vars, body) = &p else { unreachable!() };
        if eval_formula(&m, &p).unwrap() {
            for _ in 0..40 {
                let values: Vec<BigInt> = vars.iter().map(|_| big(rng.gen_range(-80..=80))).collect();
                prop_assert!(eval_body_at(&m, vars, body, &values).unwrap(), "{} at {:?}", p, values);
            }
        }
    }
}
