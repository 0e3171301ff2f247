#[path = "../../core/tests/common/mod.rs"]
mod common;

use apf_cli::{json, parse_formula, parse_script, Script};
use apf_core::{
    enumerate::{enumerate_candidates, EnumConfig},
    Symbol,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn script() -> Script {
    Script {
        declarations: vec![Symbol::array("a"), Symbol::array("b"), Symbol::int("k")],
        ..Script::default()
    }
}

#[test]
fn enumerated_candidates_reparse() {
    let s = script();
    for c in enumerate_candidates(&EnumConfig::new(6)) {
        assert_eq!(parse_formula(&s, &c.to_string()).unwrap(), c);
    }
}

#[test]
fn scripts_reprint_identically() {
    let text = "(set-logic QF_AX)\n(declare-const a (Array Int Int))\n(declare-const k Int)\n\
                (assert (forall ((j Int)) (=> (<= j k) (<= (select a j) 0))))\n";
    let s = parse_script(text).unwrap();
    let printed = s.to_string();
    assert_eq!(parse_script(&printed).unwrap().to_string(), printed);
    assert_eq!(parse_script(&printed).unwrap().assertions, s.assertions);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printed_formulas_reparse(seed in any::<u64>()) {
        let f = common::fragment_formula(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        prop_assert_eq!(parse_formula(&script(), &f.to_string()).unwrap(), f);
    }

    #[test]
    fn models_round_trip(seed in any::<u64>()) {
        let m = common::random_model(&mut ChaCha8Rng::seed_from_u64(seed));
        let text = json::write_model(&m);
        prop_assert_eq!(json::parse_model(&text).unwrap(), m);
    }
}
