//! Exact evaluation of terms and fragment formulas over a [`Model`].
//!
//! Array properties are decided by finite instantiation. Every array read at a
//! bound variable is constant outside its window, and every guard literal
//! `j <= t`, `j = t` only changes truth at `t` and `t + 1`, so the integers
//! split into finitely many pieces on which the property body cannot change.
//! [`InstantiationSet`] holds at least one point of each piece. Because guard
//! literals on bound variables are positive, collapsing several variables
//! that fall into the same piece onto one point can only make more guard
//! literals true, so a single representative per piece is enough even for
//! multi-variable blocks.

use alloc::{
    borrow::Cow,
    collections::BTreeSet,
    string::{String, ToString},
    vec::Vec,
};
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::{
    array::FinArray,
    ast::{Formula, Term, TheoryOp, Var},
    fragment::{is_in_fragment, property_parts, FragmentVerdict},
    model::Model,
};

/// The value of a term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Int(BigInt),
    Bool(bool),
    Array(FinArray),
}

impl Value {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_array(&self) -> Option<&FinArray> {
        match self {
            Value::Array(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Array(a) => {
                write!(f, "[{} | {}: ", a.left_tail(), a.lo())?;
                for (n, v) in a.window().iter().enumerate() {
                    if n > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, " | {}]", a.right_tail())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("symbol `{0}` has no assignment")]
    Unassigned(String),
    #[error("variable `{0}` is unbound")]
    UnboundVar(Var),
    #[error("ill-sorted term `{0}`")]
    IllSorted(String),
    #[error("not in the array property fragment: {0}")]
    NotInFragment(FragmentVerdict),
    #[error("bound {bound} does not cover instantiation point {point}")]
    InsufficientBound { bound: u64, point: BigInt },
}

type Env = Vec<(Var, BigInt)>;

fn lookup<'e>(env: &'e Env, v: &Var) -> Result<&'e BigInt, EvalError> {
    env.iter()
        .rev()
        .find(|(w, _)| w == v)
        .map(|(_, x)| x)
        .ok_or_else(|| EvalError::UnboundVar(v.clone()))
}

fn ill_sorted(t: &Term) -> EvalError {
    EvalError::IllSorted(t.to_string())
}

fn int_value(m: &Model, t: &Term, env: &Env) -> Result<BigInt, EvalError> {
    Ok(match t {
        Term::Int(v) => v.clone(),
        Term::Var(v) => lookup(env, v)?.clone(),
        Term::Const(s) => m
            .int(s.name())
            .cloned()
            .ok_or_else(|| EvalError::Unassigned(s.name().to_string()))?,
        Term::App(op, args) => match op {
            TheoryOp::Add => int_value(m, &args[0], env)? + int_value(m, &args[1], env)?,
            TheoryOp::Sub => int_value(m, &args[0], env)? - int_value(m, &args[1], env)?,
            TheoryOp::Mul => int_value(m, &args[0], env)? * int_value(m, &args[1], env)?,
            TheoryOp::Select => {
                let a = array_value(m, &args[0], env)?;
                let j = int_value(m, &args[1], env)?;
                a.read(&j).clone()
            }
            TheoryOp::Diff => {
                let s = array_value(m, &args[0], env)?;
                let u = array_value(m, &args[1], env)?;
                s.diff_index(&u)
            }
            _ => return Err(ill_sorted(t)),
        },
    })
}

fn array_value<'m>(m: &'m Model, t: &Term, env: &Env) -> Result<Cow<'m, FinArray>, EvalError> {
    match t {
        Term::Const(s) => m
            .array(s.name())
            .map(Cow::Borrowed)
            .ok_or_else(|| EvalError::Unassigned(s.name().to_string())),
        Term::App(TheoryOp::Store, args) => {
            let a = array_value(m, &args[0], env)?;
            let j = int_value(m, &args[1], env)?;
            let v = int_value(m, &args[2], env)?;
            Ok(Cow::Owned(a.store(&j, &v)))
        }
        _ => Err(ill_sorted(t)),
    }
}

fn bool_value(m: &Model, t: &Term, env: &Env) -> Result<bool, EvalError> {
    match t {
        Term::App(op, args) => Ok(match op {
            TheoryOp::Lt => int_value(m, &args[0], env)? < int_value(m, &args[1], env)?,
            TheoryOp::Le => int_value(m, &args[0], env)? <= int_value(m, &args[1], env)?,
            TheoryOp::Eq => int_value(m, &args[0], env)? == int_value(m, &args[1], env)?,
            TheoryOp::ArrayEq => array_value(m, &args[0], env)? == array_value(m, &args[1], env)?,
            _ => return Err(ill_sorted(t)),
        }),
        _ => Err(ill_sorted(t)),
    }
}

/// Evaluates a ground term.
pub fn eval_term(m: &Model, t: &Term) -> Result<Value, EvalError> {
    let env = Env::new();
    eval_term_in(m, t, &env)
}

fn eval_term_in(m: &Model, t: &Term, env: &Env) -> Result<Value, EvalError> {
    match t.sort() {
        crate::ast::Sort::Int => int_value(m, t, env).map(Value::Int),
        crate::ast::Sort::Bool => bool_value(m, t, env).map(Value::Bool),
        crate::ast::Sort::Array(..) => array_value(m, t, env).map(|a| Value::Array(a.into_owned())),
    }
}

/// Points over which one quantifier block is instantiated. The same point set
/// is used for every variable of the block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstantiationSet {
    pub vars: Vec<Var>,
    points: BTreeSet<BigInt>,
}

impl InstantiationSet {
    pub fn points(&self) -> &BTreeSet<BigInt> {
        &self.points
    }

    pub fn points_for(&self, v: &Var) -> Option<&BTreeSet<BigInt>> {
        self.vars.contains(v).then_some(&self.points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Default)]
struct PointCollector {
    /// Window indices and guard values with their neighbours.
    listed: BTreeSet<BigInt>,
    /// Extra representatives for gaps between windows.
    neighbours: BTreeSet<BigInt>,
}

impl PointCollector {
    fn array_read(&mut self, a: &FinArray) {
        let one = BigInt::one();
        if a.window().is_empty() {
            if a.left_tail() != a.right_tail() {
                self.neighbours.insert(a.lo() - &one);
                self.neighbours.insert(a.lo().clone());
            }
            return;
        }
        let mut j = a.lo().clone();
        for _ in a.window() {
            self.listed.insert(j.clone());
            j += 1u32;
        }
        self.neighbours.insert(a.lo() - &one);
        self.neighbours.insert(j);
    }

    fn guard_value(&mut self, v: BigInt) {
        self.listed.insert(&v - 1u32);
        self.listed.insert(&v + 1u32);
        self.listed.insert(v);
    }

    fn term(&mut self, m: &Model, t: &Term, env: &Env) -> Result<(), EvalError> {
        if let Term::App(op, args) = t {
            match (op, &args[..]) {
                (TheoryOp::Select, [arr, Term::Var(_)]) if arr.is_ground() => {
                    let a = array_value(m, arr, env)?;
                    self.array_read(&a);
                }
                (TheoryOp::Le | TheoryOp::Lt | TheoryOp::Eq, [Term::Var(_), g])
                | (TheoryOp::Le | TheoryOp::Lt | TheoryOp::Eq, [g, Term::Var(_)])
                    if g.is_ground() =>
                {
                    self.guard_value(int_value(m, g, env)?);
                }
                _ => {}
            }
            for a in args {
                self.term(m, a, env)?;
            }
        }
        Ok(())
    }

    fn finish(self, vars: Vec<Var>) -> InstantiationSet {
        let mut points = self.neighbours;
        match (self.listed.first(), self.listed.last()) {
            (Some(lo), Some(hi)) => {
                points.insert(lo - 1u32);
                points.insert(hi + 1u32);
            }
            _ if points.is_empty() => {
                points.insert(-BigInt::one());
                points.insert(BigInt::one());
            }
            _ => {}
        }
        points.extend(self.listed);
        InstantiationSet { vars, points }
    }
}

fn collect_points(m: &Model, vars: &[Var], body: &Formula, env: &Env) -> Result<InstantiationSet, EvalError> {
    let mut c = PointCollector::default();
    let mut err = None;
    body.for_each_atom(&mut |t| {
        if err.is_none() {
            if let Err(e) = c.term(m, t, env) {
                err = Some(e);
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(c.finish(vars.to_vec())),
    }
}

/// Instantiation points for the array property `phi` (a `forall`) in `m`.
///
/// The set contains the window indices of every array read at a bound
/// variable, the value `v` of every ground term compared with a bound
/// variable together with `v - 1` and `v + 1`, one sentinel below and one
/// above all of those, and the indices just outside each window.
pub fn instantiation_set(m: &Model, phi: &Formula) -> Result<InstantiationSet, EvalError> {
    match phi {
        Formula::Forall(vars, body) => collect_points(m, vars, body, &Env::new()),
        _ => Ok(InstantiationSet {
            vars: Vec::new(),
            points: BTreeSet::new(),
        }),
    }
}

/// Instantiation points gathered from every quantifier in `f`, for
/// evaluating formulas with nested quantifiers over one common domain.
pub fn instantiation_set_all(m: &Model, f: &Formula) -> Result<InstantiationSet, EvalError> {
    let mut vars = Vec::new();
    collect_binders(f, &mut vars);
    collect_points(m, &vars, f, &Env::new())
}

fn collect_binders(f: &Formula, out: &mut Vec<Var>) {
    if let Formula::Forall(vs, _) = f {
        out.extend(vs.iter().cloned());
    }
    for c in f.children() {
        collect_binders(c, out);
    }
}

enum Domain<'d> {
    /// Each property ranges over its own instantiation set, plus extra points.
    PerProperty(&'d [BigInt]),
    /// Every quantifier ranges over this fixed list.
    Fixed(&'d [BigInt]),
}

fn eval_in(m: &Model, f: &Formula, env: &mut Env, domain: &Domain<'_>) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Bool(b) => *b,
        Formula::Atom(t) => bool_value(m, t, env)?,
        Formula::Not(g) => !eval_in(m, g, env, domain)?,
        Formula::And(fs) => {
            for g in fs {
                if !eval_in(m, g, env, domain)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval_in(m, g, env, domain)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval_in(m, a, env, domain)? || eval_in(m, b, env, domain)?,
        Formula::Forall(vars, body) => {
            let owned;
            let points: &[BigInt] = match domain {
                Domain::Fixed(ps) => ps,
                Domain::PerProperty(extra) => {
                    let mut set = collect_points(m, vars, body, env)?.points;
                    set.extend(extra.iter().cloned());
                    owned = set.into_iter().collect::<Vec<_>>();
                    &owned
                }
            };
            for_all_tuples(m, vars, body, env, domain, points)?
        }
    })
}

fn for_all_tuples(
    m: &Model,
    vars: &[Var],
    body: &Formula,
    env: &mut Env,
    domain: &Domain<'_>,
    points: &[BigInt],
) -> Result<bool, EvalError> {
    if points.is_empty() {
        return Ok(true);
    }
    let base = env.len();
    for v in vars {
        env.push((v.clone(), points[0].clone()));
    }
    let mut odometer = alloc::vec![0usize; vars.len()];
    let result = loop {
        match eval_in(m, body, env, domain) {
            Ok(true) => {}
            other => break other.map(|_| false),
        }
        // Advance to the next tuple.
        let mut pos = vars.len();
        loop {
            if pos == 0 {
                env.truncate(base);
                return Ok(true);
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < points.len() {
                env[base + pos].1 = points[odometer[pos]].clone();
                break;
            }
            odometer[pos] = 0;
            env[base + pos].1 = points[0].clone();
        }
    };
    env.truncate(base);
    result
}

fn require_fragment(f: &Formula) -> Result<(), EvalError> {
    let verdict = is_in_fragment(f);
    if verdict.member() {
        Ok(())
    } else {
        Err(EvalError::NotInFragment(verdict))
    }
}

/// Truth of a fragment formula in `m`.
pub fn eval_formula(m: &Model, f: &Formula) -> Result<bool, EvalError> {
    require_fragment(f)?;
    eval_in(m, f, &mut Env::new(), &Domain::PerProperty(&[]))
}

/// As [`eval_formula`], with `extra` added to every instantiation set.
pub fn eval_formula_with_points(m: &Model, f: &Formula, extra: &[BigInt]) -> Result<bool, EvalError> {
    require_fragment(f)?;
    eval_in(m, f, &mut Env::new(), &Domain::PerProperty(extra))
}

/// Evaluates any closed formula with every quantifier ranging over `domain`
/// only. Whether that agrees with the integer semantics is up to the caller.
pub fn eval_over_domain(m: &Model, f: &Formula, domain: &[BigInt]) -> Result<bool, EvalError> {
    eval_in(m, f, &mut Env::new(), &Domain::Fixed(domain))
}

/// Evaluates the body of `forall vars. body` under one binding.
pub fn eval_body_at(m: &Model, vars: &[Var], body: &Formula, values: &[BigInt]) -> Result<bool, EvalError> {
    let mut env: Env = vars.iter().cloned().zip(values.iter().cloned()).collect();
    eval_in(m, body, &mut env, &Domain::PerProperty(&[]))
}

/// Testing oracle: quantifiers range over every integer in `[-bound, bound]`.
///
/// Fails unless the range covers every instantiation point of every
/// property of `f`.
pub fn brute_force_eval(m: &Model, f: &Formula, bound: u64) -> Result<bool, EvalError> {
    require_fragment(f)?;
    let lim = BigInt::from(bound);
    let neg = -lim.clone();
    let mut props = Vec::new();
    collect_properties(f, &mut props);
    for p in props {
        let set = instantiation_set(m, p)?;
        if let Some(point) = set.points.iter().find(|x| **x < neg || **x > lim) {
            return Err(EvalError::InsufficientBound {
                bound,
                point: point.clone(),
            });
        }
    }
    let b = bound as i64;
    let domain: Vec<BigInt> = (-b..=b).map(BigInt::from).collect();
    eval_over_domain(m, f, &domain)
}

fn collect_properties<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
    if let Formula::Forall(..) = f {
        out.push(f);
        return;
    }
    for c in f.children() {
        collect_properties(c, out);
    }
}

/// Ground terms compared with a bound variable in the guard of `phi`.
pub fn guard_terms(phi: &Formula) -> Vec<&Term> {
    let mut out = Vec::new();
    if let Formula::Forall(vars, body) = phi {
        if let (Some(guard), _) = property_parts(vars, body) {
            guard.for_each_atom(&mut |t| {
                if let Term::App(TheoryOp::Le | TheoryOp::Eq, args) = t {
                    for (x, y) in [(&args[0], &args[1]), (&args[1], &args[0])] {
                        if matches!(x, Term::Var(_)) && y.is_ground() {
                            out.push(y);
                        }
                    }
                }
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;
    use crate::{ast::Symbol, model::paper_model};

    fn arr(n: &str) -> Term {
        Term::Const(Symbol::array(n))
    }
    fn int(n: &str) -> Term {
        Term::Const(Symbol::int(n))
    }
    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn set(vs: &[i64]) -> BTreeSet<BigInt> {
        vs.iter().map(|&v| big(v)).collect()
    }

    fn formula_a() -> Formula {
        let body = Formula::lt(Term::select(arr("a"), Term::var("i")), Term::select(arr("b"), int("k")));
        Formula::forall(vec![Var::new("i")], body).unwrap()
    }

    fn formula_b() -> Formula {
        let body = Formula::not(Formula::lt(
            Term::select(arr("a"), int("l")),
            Term::select(arr("b"), Term::var("j")),
        ));
        Formula::forall(vec![Var::new("j")], body).unwrap()
    }

    #[test]
    fn ground_terms() {
        let m4 = paper_model(4);
        assert_eq!(
            eval_term(&m4, &Term::select(arr("b"), int("k"))),
            Ok(Value::Int(big(3)))
        );
        for i in 0..20 {
            let v = eval_term(&paper_model(i), &Term::diff(arr("a"), arr("b"))).unwrap();
            assert_eq!(v, Value::Int(big(-1)));
        }
        let sum = Term::binary(TheoryOp::Add, Term::int(2), Term::int(3));
        assert_eq!(eval_term(&Model::new(), &sum), Ok(Value::Int(big(5))));
        assert_eq!(
            eval_term(&Model::new(), &int("k")),
            Err(EvalError::Unassigned("k".into()))
        );
    }

    #[test]
    fn instantiation_sets_for_model_family() {
        let s = instantiation_set(&paper_model(2), &formula_a()).unwrap();
        assert_eq!(s.points(), &set(&[0, 1, 2, 3]));
        let s = instantiation_set(&paper_model(4), &formula_b()).unwrap();
        assert!(set(&[0, 1, 2, 3, 4, 5]).is_subset(s.points()));

        let m = Model::new().with_array("a", FinArray::constant(0));
        let body = Formula::implies(
            Formula::Bool(true),
            Formula::eq(Term::select(arr("a"), Term::var("j")), Term::int(0)),
        );
        let phi = Formula::forall(vec![Var::new("j")], body).unwrap();
        let s = instantiation_set(&m, &phi).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(eval_formula(&m, &phi), Ok(true));
    }

    #[test]
    fn family_members_satisfy_their_side() {
        assert_eq!(eval_formula(&paper_model(2), &formula_a()), Ok(true));
        assert_eq!(eval_formula(&paper_model(3), &formula_b()), Ok(true));
        assert_eq!(eval_formula(&paper_model(2), &formula_b()), Ok(false));
        assert_eq!(brute_force_eval(&paper_model(2), &formula_a(), 50), Ok(true));
        assert_eq!(brute_force_eval(&paper_model(2), &formula_b(), 50), Ok(false));
    }

    #[test]
    fn brute_force_needs_a_covering_bound() {
        assert!(matches!(
            brute_force_eval(&paper_model(10), &formula_a(), 5),
            Err(EvalError::InsufficientBound { .. })
        ));
    }

    #[test]
    fn tautological_body() {
        let body = Formula::implies(
            Formula::Bool(true),
            Formula::eq(
                Term::select(arr("a"), Term::var("j")),
                Term::select(arr("a"), Term::var("j")),
            ),
        );
        let phi = Formula::forall(vec![Var::new("j")], body).unwrap();
        assert_eq!(brute_force_eval(&paper_model(5), &phi, 20), Ok(true));
        assert_eq!(eval_formula(&paper_model(5), &phi), Ok(true));
    }

    #[test]
    fn refuses_formulas_outside_the_fragment() {
        let inner = Formula::forall(
            vec![Var::new("i")],
            Formula::lt(
                Term::select(arr("a"), Term::var("i")),
                Term::select(arr("b"), Term::var("j")),
            ),
        )
        .unwrap();
        let i1 = Formula::exists(vec![Var::new("j")], inner).unwrap();
        assert!(matches!(
            eval_formula(&paper_model(2), &i1),
            Err(EvalError::NotInFragment(_))
        ));
    }

    #[test]
    fn guard_regions_are_represented() {
        // forall j. k <= j => a[j] = 0, with a nonzero only below k.
        let m = Model::new()
            .with_int("k", 5)
            .with_array("a", FinArray::from_parts(0, 2, vec![big(7)], 0));
        let body = Formula::implies(
            Formula::le(int("k"), Term::var("j")),
            Formula::eq(Term::select(arr("a"), Term::var("j")), Term::int(0)),
        );
        let phi = Formula::forall(vec![Var::new("j")], body).unwrap();
        assert_eq!(eval_formula(&m, &phi), Ok(true));
        assert_eq!(guard_terms(&phi), vec![&int("k")]);
        let s = instantiation_set(&m, &phi).unwrap();
        assert!(set(&[1, 2, 3, 4, 5, 6]).is_subset(s.points()));
    }

    #[test]
    fn disjoint_windows_leave_a_gap_representative() {
        // a is 1 at 0, b is 1 at 10; they agree nowhere in between... except
        // the gap, where both read their tails (0 and 0).
        let m = Model::new()
            .with_array("a", FinArray::from_parts(0, 0, vec![big(1)], 5))
            .with_array("b", FinArray::from_parts(0, 10, vec![big(1)], 0));
        let body = Formula::not(Formula::eq(
            Term::select(arr("a"), Term::var("j")),
            Term::select(arr("b"), Term::var("j")),
        ));
        let phi = Formula::forall(vec![Var::new("j")], body).unwrap();
        assert_eq!(eval_formula(&m, &phi), brute_force_eval(&m, &phi, 30));
    }
}
