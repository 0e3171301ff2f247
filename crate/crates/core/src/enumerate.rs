//! Bounded enumeration of shared fragment formulas, one per canonical form.
//!
//! Formulas are built bottom-up by size from canonical parts and kept only if
//! they are their own canonical form, so every emitted formula has exactly
//! the size it was built at. Sizes count nodes as [`Formula::size`] does.

use alloc::{boxed::Box, collections::BTreeSet, vec, vec::Vec};
use core::ops::RangeInclusive;

use crate::{
    ast::{Formula, Symbol, Term, TheoryOp, Var},
    canon::{canon_formula, canon_term},
    fragment::is_in_fragment,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    pub size_bound: usize,
    pub literals: RangeInclusive<i64>,
    pub include_diff: bool,
    /// Largest quantifier block.
    pub max_vars: usize,
    /// Connectives allowed between top-level formulas: `not`, `and`, `or`.
    pub top_level_connectives: bool,
}

impl EnumConfig {
    pub fn new(size_bound: usize) -> Self {
        EnumConfig {
            size_bound,
            literals: -2..=2,
            include_diff: true,
            max_vars: 2,
            top_level_connectives: true,
        }
    }
}

type Layers<T> = Vec<Vec<T>>;

fn layers<T>(n: usize) -> Layers<T> {
    (0..=n).map(|_| Vec::new()).collect()
}

/// Every split of `total` into two positive sizes.
fn splits(total: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..total).map(move |x| (x, total - x))
}

fn push_term(set: &mut BTreeSet<Term>, t: Term) {
    if canon_term(&t) == t {
        set.insert(t);
    }
}

fn push_formula(set: &mut BTreeSet<Formula>, f: Formula) {
    if canon_formula(&f) == f {
        set.insert(f);
    }
}

fn pred(op: TheoryOp, x: &Term, y: &Term) -> Formula {
    Formula::Atom(Term::App(op, vec![x.clone(), y.clone()]))
}

struct Ground {
    ints: Layers<Term>,
    arrays: Layers<Term>,
    atoms: Layers<Formula>,
}

fn ground(cfg: &EnumConfig) -> Ground {
    let n = cfg.size_bound;
    let mut g = Ground {
        ints: layers(n),
        arrays: layers(n),
        atoms: layers(n),
    };
    if n == 0 {
        return g;
    }
    g.ints[1] = cfg.literals.clone().map(Term::int).collect();
    g.arrays[1] = vec![Term::Const(Symbol::array("a")), Term::Const(Symbol::array("b"))];
    for s in 2..=n {
        let mut ints = BTreeSet::new();
        let mut arrays = BTreeSet::new();
        for (x, y) in splits(s - 1) {
            for arr in &g.arrays[x] {
                for i in &g.ints[y] {
                    push_term(&mut ints, Term::App(TheoryOp::Select, vec![arr.clone(), i.clone()]));
                }
            }
            for p in &g.ints[x] {
                for q in &g.ints[y] {
                    for op in [TheoryOp::Add, TheoryOp::Sub] {
                        push_term(&mut ints, Term::App(op, vec![p.clone(), q.clone()]));
                    }
                }
            }
            if cfg.include_diff {
                for s1 in &g.arrays[x] {
                    for s2 in &g.arrays[y] {
                        push_term(&mut ints, Term::App(TheoryOp::Diff, vec![s1.clone(), s2.clone()]));
                    }
                }
            }
        }
        for x in 1..s {
            for (y, z) in splits(s - 1 - x) {
                for arr in &g.arrays[x] {
                    for i in &g.ints[y] {
                        for v in &g.ints[z] {
                            push_term(
                                &mut arrays,
                                Term::App(TheoryOp::Store, vec![arr.clone(), i.clone(), v.clone()]),
                            );
                        }
                    }
                }
            }
        }
        g.ints[s] = ints.into_iter().collect();
        g.arrays[s] = arrays.into_iter().collect();
    }
    for s in 3..=n {
        let mut atoms = BTreeSet::new();
        for (x, y) in splits(s - 1) {
            for p in &g.ints[x] {
                for q in &g.ints[y] {
                    for op in [TheoryOp::Lt, TheoryOp::Le, TheoryOp::Eq] {
                        push_formula(&mut atoms, pred(op, p, q));
                    }
                }
            }
            for p in &g.arrays[x] {
                for q in &g.arrays[y] {
                    push_formula(&mut atoms, pred(TheoryOp::ArrayEq, p, q));
                }
            }
        }
        g.atoms[s] = atoms.into_iter().collect();
    }
    g
}

/// Closes `base` under `not`, `and` and `or` up to size `n`. `and`/`or`
/// operands are added one at a time onto a junction of the same kind.
fn boolean_closure(base: &Layers<Formula>, n: usize, allow_not: bool) -> Layers<Formula> {
    let mut out: Vec<BTreeSet<Formula>> = base.iter().map(|l| l.iter().cloned().collect()).collect();
    for s in 1..=n {
        if allow_not && s >= 2 {
            let prev: Vec<Formula> = out[s - 1].iter().cloned().collect();
            for f in prev {
                push_formula(&mut out[s], Formula::Not(Box::new(f)));
            }
        }
        for (x, y) in splits(s.saturating_sub(1)) {
            let left: Vec<Formula> = out[x].iter().cloned().collect();
            let right: Vec<Formula> = out[y].iter().cloned().collect();
            for p in &left {
                if matches!(p, Formula::And(_) | Formula::Or(_)) {
                    continue;
                }
                for q in &right {
                    for is_and in [true, false] {
                        let f = match q {
                            Formula::And(qs) if is_and => {
                                let mut v = qs.clone();
                                v.push(p.clone());
                                v.sort();
                                Formula::And(v)
                            }
                            Formula::Or(qs) if !is_and => {
                                let mut v = qs.clone();
                                v.push(p.clone());
                                v.sort();
                                Formula::Or(v)
                            }
                            _ => {
                                let mut v = vec![p.clone(), q.clone()];
                                v.sort();
                                if is_and {
                                    Formula::And(v)
                                } else {
                                    Formula::Or(v)
                                }
                            }
                        };
                        push_formula(&mut out[s], f);
                    }
                }
            }
        }
    }
    out.into_iter().map(|l| l.into_iter().collect()).collect()
}

/// Properties `forall vars. guard => value` and `forall vars. value` with
/// bodies of size below `n`.
fn properties(cfg: &EnumConfig, g: &Ground, vars: &[Var]) -> Layers<Formula> {
    let n = cfg.size_bound;
    let body_max = n.saturating_sub(1);
    let var_terms: Vec<Term> = vars.iter().cloned().map(Term::Var).collect();

    // Open integer terms: reads at a bound variable, then arithmetic.
    let mut open: Vec<BTreeSet<Term>> = (0..=n).map(|_| BTreeSet::new()).collect();
    for s in 3..=body_max {
        for arr in &g.arrays[s - 2] {
            for v in &var_terms {
                push_term(&mut open[s], Term::App(TheoryOp::Select, vec![arr.clone(), v.clone()]));
            }
        }
        for (x, y) in splits(s - 1) {
            for op in [TheoryOp::Add, TheoryOp::Sub] {
                let (ox, oy): (Vec<Term>, Vec<Term>) =
                    (open[x].iter().cloned().collect(), open[y].iter().cloned().collect());
                for p in &ox {
                    for q in oy.iter().chain(&g.ints[y]) {
                        push_term(&mut open[s], Term::App(op, vec![p.clone(), q.clone()]));
                    }
                }
                for p in &g.ints[x] {
                    for q in &oy {
                        push_term(&mut open[s], Term::App(op, vec![p.clone(), q.clone()]));
                    }
                }
            }
        }
    }

    // Value constraints: Boolean combinations of open and ground atoms.
    let mut value_atoms: Layers<Formula> = layers(n);
    for (s, slot) in value_atoms.iter_mut().enumerate().take(body_max + 1).skip(3) {
        let mut atoms: BTreeSet<Formula> = g.atoms[s].iter().cloned().collect();
        for (x, y) in splits(s - 1) {
            for p in open[x].iter().chain(&g.ints[x]) {
                for q in open[y].iter().chain(&g.ints[y]) {
                    if p.is_ground() && q.is_ground() {
                        continue;
                    }
                    for op in [TheoryOp::Lt, TheoryOp::Le, TheoryOp::Eq] {
                        push_formula(&mut atoms, pred(op, p, q));
                    }
                }
            }
        }
        *slot = atoms.into_iter().collect();
    }
    let values = boolean_closure(&value_atoms, body_max, true);

    // Guards: positive combinations of bound-variable literals and ground
    // literals (possibly negated).
    let mut guard_atoms: Layers<Formula> = layers(n);
    for (s, slot) in guard_atoms.iter_mut().enumerate().take(body_max + 1).skip(3) {
        let mut atoms: BTreeSet<Formula> = g.atoms[s].iter().cloned().collect();
        for t in g.atoms[s.saturating_sub(1)].iter() {
            push_formula(&mut atoms, Formula::Not(Box::new(t.clone())));
        }
        for v in &var_terms {
            for t in &g.ints[s - 2] {
                push_formula(&mut atoms, pred(TheoryOp::Le, v, t));
                push_formula(&mut atoms, pred(TheoryOp::Le, t, v));
                push_formula(&mut atoms, pred(TheoryOp::Eq, v, t));
                push_formula(&mut atoms, pred(TheoryOp::Eq, t, v));
            }
        }
        if s == 3 {
            for v in &var_terms {
                for w in &var_terms {
                    if v != w {
                        push_formula(&mut atoms, pred(TheoryOp::Le, v, w));
                        push_formula(&mut atoms, pred(TheoryOp::Eq, v, w));
                    }
                }
            }
        }
        *slot = atoms.into_iter().collect();
    }
    let guards = boolean_closure(&guard_atoms, body_max, false);

    let mut out: Vec<BTreeSet<Formula>> = (0..=n).map(|_| BTreeSet::new()).collect();
    let mut add = |f: Formula| {
        let s = f.size();
        if s <= n && canon_formula(&f) == f && is_in_fragment(&f).member() {
            out[s].insert(f);
        }
    };
    for s in 1..=body_max {
        for v in &values[s] {
            add(Formula::Forall(vars.to_vec(), Box::new(v.clone())));
        }
        for (x, y) in splits(s - 1) {
            for gd in &guards[x] {
                if gd.free_vars().is_empty() {
                    continue;
                }
                for v in &values[y] {
                    add(Formula::Forall(
                        vars.to_vec(),
                        Box::new(Formula::Implies(Box::new(gd.clone()), Box::new(v.clone()))),
                    ));
                }
            }
        }
    }
    out.into_iter().map(|l| l.into_iter().collect()).collect()
}

/// All shared fragment formulas of size at most `cfg.size_bound`, one per
/// canonical form, ordered by size and then structurally.
pub fn enumerate_candidates(cfg: &EnumConfig) -> Vec<Formula> {
    let n = cfg.size_bound;
    if n == 0 {
        return Vec::new();
    }
    let g = ground(cfg);
    let mut base: Layers<Formula> = layers(n);
    base[1] = vec![Formula::Bool(false), Formula::Bool(true)];
    for (slot, atoms) in base.iter_mut().zip(&g.atoms).skip(1) {
        slot.extend(atoms.iter().cloned());
    }
    let names = ["j0", "j1", "j2", "j3"];
    for k in 1..=cfg.max_vars.min(names.len()) {
        let vars: Vec<Var> = names[..k].iter().map(|s| Var::new(s)).collect();
        for (s, ps) in properties(cfg, &g, &vars).into_iter().enumerate() {
            base[s].extend(ps);
        }
    }
    let all = if cfg.top_level_connectives {
        boolean_closure(&base, n, true)
    } else {
        base
    };
    let mut out = Vec::new();
    for layer in all {
        let mut layer: Vec<Formula> = layer.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        out.append(&mut layer);
    }
    out
}

/// Ground integer terms of size at most `cfg.size_bound`, one per canonical
/// form.
pub fn enumerate_ground_terms(cfg: &EnumConfig) -> Vec<Term> {
    let g = ground(cfg);
    g.ints.into_iter().chain(g.arrays).flatten().collect()
}
