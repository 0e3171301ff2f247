//! Random models, terms and fragment formulas for property tests.
#![allow(dead_code)]

use apf_core::{FinArray, Formula, Model, Symbol, Term, TheoryOp, Var};
use num_bigint::BigInt;
use rand::{seq::SliceRandom, Rng};

pub fn a() -> Term {
    Term::Const(Symbol::array("a"))
}

pub fn b() -> Term {
    Term::Const(Symbol::array("b"))
}

pub fn k() -> Term {
    Term::Const(Symbol::int("k"))
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Tails and entries in `[-3, 3]`, window inside `[-20, 20]`.
pub fn random_array(rng: &mut impl Rng) -> FinArray {
    let lo = rng.gen_range(-20i64..=20);
    let len = rng.gen_range(0..=(20 - lo).min(8) as usize);
    let window = (0..len).map(|_| big(rng.gen_range(-3..=3))).collect();
    FinArray::from_parts(rng.gen_range(-3i64..=3), lo, window, rng.gen_range(-3i64..=3))
}

pub fn random_model(rng: &mut impl Rng) -> Model {
    Model::new()
        .with_int("k", rng.gen_range(-20i64..=20))
        .with_array("a", random_array(rng))
        .with_array("b", random_array(rng))
}

fn array_term(rng: &mut impl Rng, depth: u32) -> Term {
    if depth > 0 && rng.gen_bool(0.2) {
        let base = array_term(rng, depth - 1);
        Term::store(base, Term::int(rng.gen_range(-5..=5)), Term::int(rng.gen_range(-3..=3)))
    } else if rng.gen_bool(0.5) {
        a()
    } else {
        b()
    }
}

/// Ground integer terms with values inside `[-21, 21]` in models from
/// [`random_model`].
pub fn ground_int(rng: &mut impl Rng, depth: u32) -> Term {
    match rng.gen_range(0..5) {
        0 => Term::int(rng.gen_range(-5..=5)),
        1 => k(),
        2 => Term::diff(array_term(rng, depth), array_term(rng, depth)),
        _ => Term::select(array_term(rng, depth), Term::int(rng.gen_range(-5..=5))),
    }
}

fn value_int(rng: &mut impl Rng, vars: &[Var]) -> Term {
    if rng.gen_bool(0.6) {
        let v = vars.choose(rng).unwrap().clone();
        let read = Term::select(array_term(rng, 1), Term::Var(v));
        if rng.gen_bool(0.2) {
            Term::binary(TheoryOp::Add, read, Term::int(rng.gen_range(-2..=2)))
        } else {
            read
        }
    } else {
        ground_int(rng, 1)
    }
}

fn comparison(rng: &mut impl Rng, x: Term, y: Term) -> Formula {
    match rng.gen_range(0..3) {
        0 => Formula::lt(x, y),
        1 => Formula::le(x, y),
        _ => Formula::eq(x, y),
    }
}

pub fn value_constraint(rng: &mut impl Rng, vars: &[Var], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        let (x, y) = (value_int(rng, vars), value_int(rng, vars));
        return comparison(rng, x, y);
    }
    match rng.gen_range(0..3) {
        0 => Formula::not(value_constraint(rng, vars, depth - 1)),
        1 => Formula::And(vec![
            value_constraint(rng, vars, depth - 1),
            value_constraint(rng, vars, depth - 1),
        ]),
        _ => Formula::Or(vec![
            value_constraint(rng, vars, depth - 1),
            value_constraint(rng, vars, depth - 1),
        ]),
    }
}

pub fn guard(rng: &mut impl Rng, vars: &[Var], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.5) {
        let v = Term::Var(vars.choose(rng).unwrap().clone());
        let w = Term::Var(vars.choose(rng).unwrap().clone());
        let t = ground_int(rng, 0);
        let u = ground_int(rng, 0);
        return match rng.gen_range(0..7) {
            0 => Formula::le(v, t),
            1 => Formula::le(t, v),
            2 => Formula::eq(v, t),
            3 => Formula::le(v, w),
            4 => Formula::eq(v, w),
            5 => Formula::not(comparison(rng, u, t)),
            _ => comparison(rng, u, t),
        };
    }
    let (x, y) = (guard(rng, vars, depth - 1), guard(rng, vars, depth - 1));
    if rng.gen_bool(0.5) {
        Formula::And(vec![x, y])
    } else {
        Formula::Or(vec![x, y])
    }
}

pub fn property(rng: &mut impl Rng) -> Formula {
    let vars: Vec<Var> = if rng.gen_bool(0.6) {
        vec![Var::new("j")]
    } else {
        vec![Var::new("j"), Var::new("h")]
    };
    let value = value_constraint(rng, &vars, 2);
    let body = if rng.gen_bool(0.8) {
        Formula::implies(guard(rng, &vars, 2), value)
    } else {
        value
    };
    Formula::forall(vars, body).unwrap()
}

/// A Boolean combination of array properties and ground atoms.
pub fn fragment_formula(rng: &mut impl Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.7) {
            property(rng)
        } else {
            let (x, y) = (ground_int(rng, 1), ground_int(rng, 1));
            comparison(rng, x, y)
        };
    }
    match rng.gen_range(0..4) {
        0 => Formula::not(fragment_formula(rng, depth - 1)),
        1 => Formula::And(vec![fragment_formula(rng, depth - 1), fragment_formula(rng, depth - 1)]),
        2 => Formula::Or(vec![fragment_formula(rng, depth - 1), fragment_formula(rng, depth - 1)]),
        _ => Formula::implies(fragment_formula(rng, depth - 1), fragment_formula(rng, depth - 1)),
    }
}

/// Shared ground terms over `a`, `b` and literals in `[0, 8]`, depth at most
/// `depth`.
pub fn shared_term(rng: &mut impl Rng, depth: u32, want_array: bool) -> Term {
    if depth <= 1 || rng.gen_bool(0.25) {
        return if want_array {
            if rng.gen_bool(0.5) {
                a()
            } else {
                b()
            }
        } else {
            Term::int(rng.gen_range(0..=8))
        };
    }
    let d = depth - 1;
    if want_array {
        return Term::store(
            shared_term(rng, d, true),
            shared_term(rng, d, false),
            shared_term(rng, d, false),
        );
    }
    match rng.gen_range(0..4) {
        0 => Term::select(shared_term(rng, d, true), shared_term(rng, d, false)),
        1 => Term::diff(shared_term(rng, d, true), shared_term(rng, d, true)),
        2 => Term::binary(TheoryOp::Add, shared_term(rng, d, false), shared_term(rng, d, false)),
        _ => Term::binary(TheoryOp::Sub, shared_term(rng, d, false), shared_term(rng, d, false)),
    }
}

/// Array properties over `a` and `b` with ground parts from
/// [`shared_term`].
pub fn shared_property(rng: &mut impl Rng) -> Formula {
    let j = Var::new("j");
    let read = |rng: &mut dyn rand::RngCore| {
        let arr = if rng.gen_bool(0.5) { a() } else { b() };
        Term::select(arr, Term::Var(Var::new("j")))
    };
    let x = read(rng);
    let y = if rng.gen_bool(0.5) {
        read(rng)
    } else {
        shared_term(rng, 2, false)
    };
    let value = match rng.gen_range(0..4) {
        0 => Formula::lt(x, y),
        1 => Formula::le(x, y),
        2 => Formula::eq(x, y),
        _ => Formula::not(Formula::lt(x, y)),
    };
    let g = match rng.gen_range(0..4) {
        0 => Formula::Bool(true),
        1 => Formula::le(Term::Var(j.clone()), shared_term(rng, 2, false)),
        2 => Formula::le(shared_term(rng, 2, false), Term::Var(j.clone())),
        _ => Formula::eq(Term::Var(j.clone()), shared_term(rng, 2, false)),
    };
    Formula::forall(vec![j], Formula::implies(g, value)).unwrap()
}
