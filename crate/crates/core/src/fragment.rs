//! Syntactic recognition of the alternation-free array property fragment.
//!
//! An array property is `forall js. guard => value` where
//!
//! * the guard is an `and`/`or` combination of ground literals and the
//!   positive variable literals `j <= t`, `t <= j`, `j <= j'`, `j = t`,
//!   `j = j'` (`t` ground), and
//! * in the value constraint every bound variable occurs only as the index of
//!   an array read `a[j]`, and no such read sits inside the arguments of
//!   `select`, `store` or `diff`.
//!
//! The fragment is every Boolean combination of array properties and
//! quantifier-free formulas. Nested quantifiers are rejected outright.

use alloc::{boxed::Box, vec::Vec};
use core::fmt;

use crate::ast::{Formula, Term, TheoryOp, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RejectReason {
    NegatedGuardLiteral,
    IllegalGuardLiteralShape,
    NestedSelectOnQuantifiedVar,
    QuantifiedVarInStoreOrDiff,
    QuantifiedVarOutsideSelect,
    QuantifierAlternation,
    /// A quantifier below an uninterpreted symbol. Formulas of this crate
    /// cannot express that, so the recognizer never reports it; it exists for
    /// front ends that accept richer input.
    QuantifierUnderUninterpretedContext,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::NegatedGuardLiteral => "negated-guard-literal",
            RejectReason::IllegalGuardLiteralShape => "illegal-guard-literal-shape",
            RejectReason::NestedSelectOnQuantifiedVar => "nested-select-on-quantified-var",
            RejectReason::QuantifiedVarInStoreOrDiff => "quantified-var-in-store-or-diff",
            RejectReason::QuantifiedVarOutsideSelect => "quantified-var-outside-select",
            RejectReason::QuantifierAlternation => "quantifier-alternation",
            RejectReason::QuantifierUnderUninterpretedContext => "quantifier-under-uninterpreted-context",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Position inside a formula: child indices from the root, continuing into
/// term arguments once an atom is reached. An atom's term is child 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<u32>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn child(&self, n: usize) -> Self {
        let mut steps = self.0.clone();
        steps.push(n as u32);
        Path(steps)
    }

    pub fn steps(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for s in &self.0 {
            write!(f, "/{s}")?;
        }
        Ok(())
    }
}

/// Result of a fragment check. `member` iff there is no rejection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FragmentVerdict {
    pub reason: Option<RejectReason>,
    pub location: Path,
}

impl FragmentVerdict {
    pub fn accept() -> Self {
        FragmentVerdict {
            reason: None,
            location: Path::root(),
        }
    }

    pub fn reject(reason: RejectReason, location: Path) -> Self {
        FragmentVerdict {
            reason: Some(reason),
            location,
        }
    }

    pub fn member(&self) -> bool {
        self.reason.is_none()
    }

    fn from_result(r: Result<(), (RejectReason, Path)>) -> Self {
        match r {
            Ok(()) => Self::accept(),
            Err((reason, at)) => Self::reject(reason, at),
        }
    }
}

impl fmt::Display for FragmentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason {
            None => f.write_str("member"),
            Some(r) => write!(f, "rejected {r} at {}", self.location),
        }
    }
}

type Check = Result<(), (RejectReason, Path)>;

fn bound_var<'t>(t: &'t Term, vars: &[Var]) -> Option<&'t Var> {
    match t {
        Term::Var(v) if vars.contains(v) => Some(v),
        _ => None,
    }
}

/// Checks that `g` is an index guard over `vars`.
pub fn is_index_guard(g: &Formula, vars: &[Var]) -> FragmentVerdict {
    FragmentVerdict::from_result(check_guard(g, vars, &Path::root()))
}

fn check_guard(g: &Formula, vars: &[Var], at: &Path) -> Check {
    match g {
        Formula::Bool(_) => Ok(()),
        Formula::Atom(t) => check_guard_literal(t, vars, &at.child(0)),
        Formula::And(fs) | Formula::Or(fs) => fs
            .iter()
            .enumerate()
            .try_for_each(|(n, f)| check_guard(f, vars, &at.child(n))),
        // Negation (and the antecedent of an implication) is only allowed
        // over ground material.
        Formula::Not(f) => check_ground_guard_part(f, at),
        Formula::Implies(a, b) => {
            check_ground_guard_part(a, &at.child(0))?;
            check_guard(b, vars, &at.child(1))
        }
        Formula::Forall(..) => Err((RejectReason::QuantifierAlternation, at.clone())),
    }
}

fn check_ground_guard_part(f: &Formula, at: &Path) -> Check {
    if !f.is_quantifier_free() {
        return Err((RejectReason::QuantifierAlternation, at.clone()));
    }
    let mut open = false;
    f.for_each_atom(&mut |t| open |= !t.is_ground());
    if open {
        Err((RejectReason::NegatedGuardLiteral, at.clone()))
    } else {
        Ok(())
    }
}

fn check_guard_literal(t: &Term, vars: &[Var], at: &Path) -> Check {
    if t.is_ground() {
        return Ok(());
    }
    let ok = match t {
        Term::App(TheoryOp::Le | TheoryOp::Eq, args) => {
            let (l, r) = (&args[0], &args[1]);
            match (bound_var(l, vars), bound_var(r, vars)) {
                (Some(_), Some(_)) => true,
                (Some(_), None) => r.is_ground(),
                (None, Some(_)) => l.is_ground(),
                (None, None) => false,
            }
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err((RejectReason::IllegalGuardLiteralShape, at.clone()))
    }
}

/// Checks that `v` is a value constraint over `vars`.
pub fn is_value_constraint(v: &Formula, vars: &[Var]) -> FragmentVerdict {
    FragmentVerdict::from_result(check_value(v, vars, &Path::root()))
}

fn check_value(v: &Formula, vars: &[Var], at: &Path) -> Check {
    match v {
        Formula::Bool(_) => Ok(()),
        Formula::Atom(t) => check_value_term(t, vars, Context::Top, &at.child(0)),
        Formula::Forall(..) => Err((RejectReason::QuantifierAlternation, at.clone())),
        _ => v
            .children()
            .into_iter()
            .enumerate()
            .try_for_each(|(n, c)| check_value(c, vars, &at.child(n))),
    }
}

/// Where a term sits relative to array operations.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Context {
    /// Not inside any select/store/diff argument.
    Top,
    /// Inside an argument of `select` (other than a bare index variable).
    UnderSelect,
    /// Inside an argument of `store` or `diff`.
    UnderStoreOrDiff,
}

fn check_value_term(t: &Term, vars: &[Var], ctx: Context, at: &Path) -> Check {
    match t {
        Term::Int(_) | Term::Const(_) => Ok(()),
        Term::Var(v) if !vars.contains(v) => Ok(()),
        Term::Var(_) => Err((
            match ctx {
                Context::UnderStoreOrDiff => RejectReason::QuantifiedVarInStoreOrDiff,
                _ => RejectReason::QuantifiedVarOutsideSelect,
            },
            at.clone(),
        )),
        Term::App(TheoryOp::Select, args) => {
            let (array, index) = (&args[0], &args[1]);
            let inner = match ctx {
                Context::Top => Context::UnderSelect,
                c => c,
            };
            check_value_term(array, vars, inner, &at.child(0))?;
            if matches!(index, Term::Var(v) if vars.contains(v)) {
                if ctx == Context::Top {
                    Ok(())
                } else {
                    Err((RejectReason::NestedSelectOnQuantifiedVar, at.clone()))
                }
            } else {
                check_value_term(index, vars, inner, &at.child(1))
            }
        }
        Term::App(TheoryOp::Store | TheoryOp::Diff, args) => args
            .iter()
            .enumerate()
            .try_for_each(|(n, a)| check_value_term(a, vars, Context::UnderStoreOrDiff, &at.child(n))),
        Term::App(_, args) => args
            .iter()
            .enumerate()
            .try_for_each(|(n, a)| check_value_term(a, vars, ctx, &at.child(n))),
    }
}

/// The guard/value split of an array property body: `guard => value` when the
/// antecedent is a legal index guard, otherwise the whole body is the value
/// constraint under the guard `true`.
pub fn property_parts<'f>(vars: &[Var], body: &'f Formula) -> (Option<&'f Formula>, &'f Formula) {
    if let Formula::Implies(g, v) = body {
        if check_guard(g, vars, &Path::root()).is_ok() {
            return (Some(g), v);
        }
    }
    (None, body)
}

fn check_property(vars: &[Var], body: &Formula, at: &Path) -> Check {
    let body_at = at.child(0);
    if let Formula::Implies(g, v) = body {
        return match check_guard(g, vars, &body_at.child(0)) {
            Ok(()) => check_value(v, vars, &body_at.child(1)),
            // `forall j. (p => q)` with a non-guard `p` is still a property if
            // the whole implication is a value constraint.
            Err(guard_err) => check_value(body, vars, &body_at).map_err(|_| guard_err),
        };
    }
    check_value(body, vars, &body_at)
}

fn check_fragment(f: &Formula, at: &Path) -> Check {
    match f {
        Formula::Bool(_) => Ok(()),
        Formula::Atom(t) => {
            if !t.is_ground() {
                Err((RejectReason::QuantifiedVarOutsideSelect, at.child(0)))
            } else {
                Ok(())
            }
        }
        Formula::Forall(vars, body) => check_property(vars, body, at),
        _ => f
            .children()
            .into_iter()
            .enumerate()
            .try_for_each(|(n, c)| check_fragment(c, &at.child(n))),
    }
}

/// Membership in the alternation-free array property fragment.
pub fn is_in_fragment(f: &Formula) -> FragmentVerdict {
    FragmentVerdict::from_result(check_fragment(f, &Path::root()))
}

/// Rewrites strict comparisons against bound variables in property guards:
/// `j < t` becomes `j <= t - 1` and `t < j` becomes `t + 1 <= j`.
///
/// The recognizer itself rejects strict guard literals; run this first to
/// accept them.
pub fn normalize_strict_guards(f: &Formula) -> Formula {
    match f {
        Formula::Forall(vars, body) => {
            let body = match &**body {
                Formula::Implies(g, v) => Formula::implies(rewrite_strict(g, vars), (**v).clone()),
                other => other.clone(),
            };
            Formula::Forall(vars.clone(), Box::new(body))
        }
        Formula::Not(g) => Formula::not(normalize_strict_guards(g)),
        Formula::And(fs) => Formula::And(fs.iter().map(normalize_strict_guards).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(normalize_strict_guards).collect()),
        Formula::Implies(a, b) => Formula::implies(normalize_strict_guards(a), normalize_strict_guards(b)),
        Formula::Bool(_) | Formula::Atom(_) => f.clone(),
    }
}

fn rewrite_strict(g: &Formula, vars: &[Var]) -> Formula {
    match g {
        Formula::Atom(Term::App(TheoryOp::Lt, args)) => {
            let (l, r) = (&args[0], &args[1]);
            let one = || Term::int(1);
            match (bound_var(l, vars), bound_var(r, vars)) {
                (Some(_), None) if r.is_ground() => {
                    Formula::le(l.clone(), Term::binary(TheoryOp::Sub, r.clone(), one()))
                }
                (None, Some(_)) if l.is_ground() => {
                    Formula::le(Term::binary(TheoryOp::Add, l.clone(), one()), r.clone())
                }
                _ => g.clone(),
            }
        }
        Formula::And(fs) => Formula::And(fs.iter().map(|f| rewrite_strict(f, vars)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|f| rewrite_strict(f, vars)).collect()),
        _ => g.clone(),
    }
}
