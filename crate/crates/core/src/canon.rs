//! A normal form for deduplicating formulas: commutative arguments sorted,
//! literal arithmetic and comparisons folded, Boolean constants and
//! repeated operands removed, and bound variables named by a fixed order.

use alloc::{boxed::Box, collections::BTreeSet, vec::Vec};

use num_bigint::BigInt;

use crate::ast::{Formula, Term, TheoryOp, Var};

pub fn canon_term(t: &Term) -> Term {
    let Term::App(op, args) = t else {
        return t.clone();
    };
    let mut args: Vec<Term> = args.iter().map(canon_term).collect();
    let lits: Option<Vec<&BigInt>> = args.iter().map(Term::as_int).collect();
    if let Some(l) = lits {
        match op {
            TheoryOp::Add => return Term::Int(l[0] + l[1]),
            TheoryOp::Sub => return Term::Int(l[0] - l[1]),
            TheoryOp::Mul => return Term::Int(l[0] * l[1]),
            _ => {}
        }
    }
    if *op == TheoryOp::Diff && args[0] == args[1] {
        return Term::int(0);
    }
    if op.is_commutative() {
        args.sort();
    }
    Term::App(*op, args)
}

fn canon_atom(t: &Term) -> Formula {
    let t = canon_term(t);
    if let Term::App(op, args) = &t {
        if let (Some(x), Some(y)) = (args[0].as_int(), args[1].as_int()) {
            match op {
                TheoryOp::Lt => return Formula::Bool(x < y),
                TheoryOp::Le => return Formula::Bool(x <= y),
                TheoryOp::Eq => return Formula::Bool(x == y),
                _ => {}
            }
        }
        if args[0] == args[1] {
            match op {
                TheoryOp::Lt => return Formula::Bool(false),
                TheoryOp::Le | TheoryOp::Eq | TheoryOp::ArrayEq => return Formula::Bool(true),
                _ => {}
            }
        }
    }
    Formula::Atom(t)
}

fn canon_not(f: Formula) -> Formula {
    match f {
        Formula::Bool(b) => Formula::Bool(!b),
        Formula::Not(g) => *g,
        g => Formula::Not(Box::new(g)),
    }
}

fn canon_junction(is_and: bool, fs: &[Formula]) -> Formula {
    let unit = is_and;
    let mut parts = BTreeSet::new();
    for f in fs {
        match canon_formula(f) {
            Formula::Bool(b) if b == unit => {}
            Formula::Bool(b) => return Formula::Bool(b),
            Formula::And(gs) if is_and => parts.extend(gs),
            Formula::Or(gs) if !is_and => parts.extend(gs),
            g => {
                parts.insert(g);
            }
        }
    }
    let parts: Vec<Formula> = parts.into_iter().collect();
    match parts.len() {
        0 => Formula::Bool(unit),
        1 => parts.into_iter().next().unwrap(),
        _ if is_and => Formula::And(parts),
        _ => Formula::Or(parts),
    }
}

fn rename_term(t: &Term, map: &[(Var, Var)]) -> Term {
    match t {
        Term::Var(v) => match map.iter().find(|(from, _)| from == v) {
            Some((_, to)) => Term::Var(to.clone()),
            None => t.clone(),
        },
        Term::App(op, args) => Term::App(*op, args.iter().map(|a| rename_term(a, map)).collect()),
        _ => t.clone(),
    }
}

fn rename(f: &Formula, map: &[(Var, Var)]) -> Formula {
    match f {
        Formula::Bool(_) => f.clone(),
        Formula::Atom(t) => Formula::Atom(rename_term(t, map)),
        Formula::Not(g) => Formula::Not(Box::new(rename(g, map))),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rename(g, map)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rename(g, map)).collect()),
        Formula::Implies(a, b) => Formula::Implies(Box::new(rename(a, map)), Box::new(rename(b, map))),
        Formula::Forall(vs, body) => {
            let inner: Vec<(Var, Var)> = map.iter().filter(|(from, _)| !vs.contains(from)).cloned().collect();
            Formula::Forall(vs.clone(), Box::new(rename(body, &inner)))
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn canon_forall(vars: &[Var], body: &Formula) -> Formula {
    let body = canon_formula(body);
    if let Formula::Bool(_) = body {
        return body;
    }
    let free = body.free_vars();
    let used: Vec<Var> = vars.iter().filter(|v| free.contains(*v)).cloned().collect();
    if used.is_empty() {
        return body;
    }
    // Bound names are positional; pick the least renaming.
    let mut names = vars.to_vec();
    names.sort();
    names.truncate(used.len());
    if used.len() > 4 {
        return Formula::Forall(names, Box::new(body));
    }
    permutations(used.len())
        .into_iter()
        .map(|p| {
            let map: Vec<(Var, Var)> = p
                .iter()
                .enumerate()
                .map(|(k, &n)| (used[k].clone(), names[n].clone()))
                .collect();
            canon_formula(&rename(&body, &map))
        })
        .min()
        .map(|b| Formula::Forall(names, Box::new(b)))
        .unwrap()
}

/// Normal form of `f`. Idempotent, and preserves truth in every model.
pub fn canon_formula(f: &Formula) -> Formula {
    match f {
        Formula::Bool(_) => f.clone(),
        Formula::Atom(t) => canon_atom(t),
        Formula::Not(g) => canon_not(canon_formula(g)),
        Formula::And(gs) => canon_junction(true, gs),
        Formula::Or(gs) => canon_junction(false, gs),
        Formula::Implies(a, b) => match (canon_formula(a), canon_formula(b)) {
            (Formula::Bool(true), b) => b,
            (Formula::Bool(false), _) | (_, Formula::Bool(true)) => Formula::Bool(true),
            (a, Formula::Bool(false)) if a.free_vars().is_empty() => canon_not(a),
            (a, b) if a == b => Formula::Bool(true),
            (a, b) => Formula::Implies(Box::new(a), Box::new(b)),
        },
        Formula::Forall(vars, body) => canon_forall(vars, body),
    }
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;
    use crate::ast::Symbol;

    fn a() -> Term {
        Term::Const(Symbol::array("a"))
    }
    fn b() -> Term {
        Term::Const(Symbol::array("b"))
    }

    #[test]
    fn folds_and_orders() {
        assert_eq!(canon_term(&Term::diff(b(), a())), Term::diff(a(), b()));
        assert_eq!(canon_term(&Term::diff(a(), a())), Term::int(0));
        let sum = Term::binary(TheoryOp::Add, Term::int(2), Term::int(-3));
        assert_eq!(canon_term(&sum), Term::int(-1));
        assert_eq!(
            canon_formula(&Formula::lt(Term::int(1), Term::int(2))),
            Formula::Bool(true)
        );
        let x = Formula::lt(Term::select(a(), Term::int(0)), Term::int(1));
        assert_eq!(canon_formula(&Formula::and(vec![x.clone(), x.clone()])), x);
        assert_eq!(canon_formula(&Formula::not(Formula::not(x.clone()))), x);
    }

    #[test]
    fn bound_names_are_positional() {
        let j0 = Var::new("j0");
        let j1 = Var::new("j1");
        let f = |x: &Var, y: &Var| {
            Formula::forall(
                vec![j0.clone(), j1.clone()],
                Formula::implies(
                    Formula::le(Term::Var(x.clone()), Term::Var(y.clone())),
                    Formula::le(
                        Term::select(a(), Term::Var(x.clone())),
                        Term::select(a(), Term::Var(y.clone())),
                    ),
                ),
            )
            .unwrap()
        };
        assert_eq!(canon_formula(&f(&j0, &j1)), canon_formula(&f(&j1, &j0)));
    }

    #[test]
    fn unused_binders_disappear() {
        let body = Formula::lt(Term::select(a(), Term::int(0)), Term::int(1));
        let f = Formula::forall(vec![Var::new("j")], body.clone()).unwrap();
        assert_eq!(canon_formula(&f), body);
    }
}
