//! Sorted terms and formulas over arrays and integers, extended with `diff`.

use alloc::{
    boxed::Box,
    collections::BTreeSet,
    string::{String, ToString},
    sync::Arc,
    vec,
    vec::Vec,
};
use core::fmt;

use num_bigint::BigInt;
use thiserror::Error;

/// A sort. Arrays are always indexed by and hold integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Int,
    Bool,
    Array(Box<Sort>, Box<Sort>),
}

impl Sort {
    /// `(Array Int Int)`, the only array sort used in this crate.
    pub fn int_array() -> Sort {
        Sort::Array(Box::new(Sort::Int), Box::new(Sort::Int))
    }

    pub fn is_array(&self) -> bool {
        matches!(self, Sort::Array(..))
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Int => f.write_str("Int"),
            Sort::Bool => f.write_str("Bool"),
            Sort::Array(i, e) => write!(f, "(Array {i} {e})"),
        }
    }
}

/// Interpreted function and predicate symbols.
///
/// `=` is split by argument sort so that every symbol has a single rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoryOp {
    Add,
    Sub,
    Mul,
    Lt,
    Le,
    Eq,
    ArrayEq,
    Select,
    Store,
    Diff,
}

impl TheoryOp {
    pub const ALL: [TheoryOp; 10] = [
        TheoryOp::Add,
        TheoryOp::Sub,
        TheoryOp::Mul,
        TheoryOp::Lt,
        TheoryOp::Le,
        TheoryOp::Eq,
        TheoryOp::ArrayEq,
        TheoryOp::Select,
        TheoryOp::Store,
        TheoryOp::Diff,
    ];

    /// Concrete SMT-LIB name.
    pub fn name(self) -> &'static str {
        match self {
            TheoryOp::Add => "+",
            TheoryOp::Sub => "-",
            TheoryOp::Mul => "*",
            TheoryOp::Lt => "<",
            TheoryOp::Le => "<=",
            TheoryOp::Eq | TheoryOp::ArrayEq => "=",
            TheoryOp::Select => "select",
            TheoryOp::Store => "store",
            TheoryOp::Diff => "diff",
        }
    }

    pub fn rank(self) -> Rank {
        let int = || Sort::Int;
        let arr = Sort::int_array;
        let (args, result) = match self {
            TheoryOp::Add | TheoryOp::Sub | TheoryOp::Mul => (vec![int(), int()], int()),
            TheoryOp::Lt | TheoryOp::Le | TheoryOp::Eq => (vec![int(), int()], Sort::Bool),
            TheoryOp::ArrayEq => (vec![arr(), arr()], Sort::Bool),
            TheoryOp::Select => (vec![arr(), int()], int()),
            TheoryOp::Store => (vec![arr(), int(), int()], arr()),
            TheoryOp::Diff => (vec![arr(), arr()], int()),
        };
        Rank { args, result }
    }

    pub fn arity(self) -> usize {
        match self {
            TheoryOp::Store => 3,
            _ => 2,
        }
    }

    pub fn result_sort(self) -> Sort {
        match self {
            TheoryOp::Add | TheoryOp::Sub | TheoryOp::Mul | TheoryOp::Select | TheoryOp::Diff => Sort::Int,
            TheoryOp::Lt | TheoryOp::Le | TheoryOp::Eq | TheoryOp::ArrayEq => Sort::Bool,
            TheoryOp::Store => Sort::int_array(),
        }
    }

    /// Symmetric in its two arguments. `diff` is symmetric under the fixed
    /// max-negative/min-nonnegative interpretation used throughout this crate.
    pub fn is_commutative(self) -> bool {
        matches!(
            self,
            TheoryOp::Add | TheoryOp::Mul | TheoryOp::Eq | TheoryOp::ArrayEq | TheoryOp::Diff
        )
    }

    pub fn is_predicate(self) -> bool {
        self.result_sort() == Sort::Bool
    }
}

/// Argument sorts and result sort of a function symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rank {
    pub args: Vec<Sort>,
    pub result: Sort,
}

/// An uninterpreted constant: an integer or an array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    name: Arc<str>,
    sort: Sort,
}

impl Symbol {
    pub fn new(name: &str, sort: Sort) -> Self {
        Symbol {
            name: Arc::from(name),
            sort,
        }
    }

    pub fn int(name: &str) -> Self {
        Self::new(name, Sort::Int)
    }

    pub fn array(name: &str) -> Self {
        Self::new(name, Sort::int_array())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sort(&self) -> &Sort {
        &self.sort
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    TheoryInterpreted,
    Free,
}

/// A function symbol together with its rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FuncSymbol {
    Theory(TheoryOp),
    /// Free symbols are constants (zero arguments).
    Free(Symbol),
}

impl FuncSymbol {
    pub fn name(&self) -> &str {
        match self {
            FuncSymbol::Theory(op) => op.name(),
            FuncSymbol::Free(s) => s.name(),
        }
    }

    pub fn rank(&self) -> Rank {
        match self {
            FuncSymbol::Theory(op) => op.rank(),
            FuncSymbol::Free(s) => Rank {
                args: Vec::new(),
                result: s.sort().clone(),
            },
        }
    }

    pub fn kind(&self) -> SymbolKind {
        match self {
            FuncSymbol::Theory(_) => SymbolKind::TheoryInterpreted,
            FuncSymbol::Free(_) => SymbolKind::Free,
        }
    }
}

/// A bound index variable. Bound variables always have sort `Int`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn sort(&self) -> Sort {
        Sort::Int
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Int(BigInt),
    Const(Symbol),
    Var(Var),
    App(TheoryOp, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AstError {
    #[error("`{symbol}`: argument {position} has sort {found}, expected {expected}")]
    SortMismatch {
        symbol: String,
        position: usize,
        expected: Sort,
        found: Sort,
    },
    #[error("`{symbol}` takes {expected} argument(s), got {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("atom has sort {0}, expected Bool")]
    NotBoolean(Sort),
    #[error("quantifier binds no variables")]
    EmptyBinder,
    #[error("variable `{0}` is bound twice")]
    Shadowing(Var),
    #[error("variable `{0}` occurs unbound")]
    Unbound(Var),
    #[error("substituted term `{0}` is not ground")]
    NotGround(Term),
    #[error("cannot substitute a term of sort {found} for variable `{var}` of sort Int")]
    SubstitutionSort { var: Var, found: Sort },
}

/// Builds a rank-checked application of `symbol` to `args`.
pub fn build_term(symbol: &FuncSymbol, args: Vec<Term>) -> Result<Term, AstError> {
    match symbol {
        FuncSymbol::Free(s) => {
            if !args.is_empty() {
                return Err(AstError::Arity {
                    symbol: s.name().to_string(),
                    expected: 0,
                    found: args.len(),
                });
            }
            Ok(Term::Const(s.clone()))
        }
        FuncSymbol::Theory(op) => Term::app(*op, args),
    }
}

impl Term {
    pub fn int(v: impl Into<BigInt>) -> Term {
        Term::Int(v.into())
    }

    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn constant(symbol: Symbol) -> Term {
        Term::Const(symbol)
    }

    /// Rank-checked application.
    pub fn app(op: TheoryOp, args: Vec<Term>) -> Result<Term, AstError> {
        let rank = op.rank();
        if rank.args.len() != args.len() {
            return Err(AstError::Arity {
                symbol: op.name().to_string(),
                expected: rank.args.len(),
                found: args.len(),
            });
        }
        for (position, (expected, arg)) in rank.args.iter().zip(&args).enumerate() {
            let found = arg.sort();
            if &found != expected {
                return Err(AstError::SortMismatch {
                    symbol: op.name().to_string(),
                    position,
                    expected: expected.clone(),
                    found,
                });
            }
        }
        Ok(Term::App(op, args))
    }

    // Infallible helpers for callers that already know the sorts line up.
    // They panic on a rank violation.

    pub fn select(array: Term, index: Term) -> Term {
        Term::app(TheoryOp::Select, vec![array, index]).expect("ill-sorted select")
    }

    pub fn store(array: Term, index: Term, value: Term) -> Term {
        Term::app(TheoryOp::Store, vec![array, index, value]).expect("ill-sorted store")
    }

    pub fn diff(s: Term, t: Term) -> Term {
        Term::app(TheoryOp::Diff, vec![s, t]).expect("ill-sorted diff")
    }

    pub fn binary(op: TheoryOp, lhs: Term, rhs: Term) -> Term {
        Term::app(op, vec![lhs, rhs]).expect("ill-sorted application")
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Int(_) | Term::Var(_) => Sort::Int,
            Term::Const(s) => s.sort().clone(),
            Term::App(op, _) => op.result_sort(),
        }
    }

    /// Contains no variable occurrence.
    pub fn is_ground(&self) -> bool {
        match self {
            Term::Int(_) | Term::Const(_) => true,
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Int(_) | Term::Const(_) => false,
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Term::Int(v) => Some(v),
            _ => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Const(s) => {
                out.insert(s.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_symbols(out)),
            Term::Int(_) | Term::Var(_) => {}
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Int(_) | Term::Const(_) => {}
        }
    }

    /// Recursively re-checks ranks.
    pub fn check(&self) -> Result<(), AstError> {
        if let Term::App(op, args) = self {
            args.iter().try_for_each(Term::check)?;
            Term::app(*op, args.clone())?;
        }
        Ok(())
    }

    fn substitute(&self, v: &Var, t: &Term) -> Term {
        match self {
            Term::Var(w) if w == v => t.clone(),
            Term::App(op, args) => Term::App(*op, args.iter().map(|a| a.substitute(v, t)).collect()),
            _ => self.clone(),
        }
    }
}

impl From<Symbol> for Term {
    fn from(s: Symbol) -> Self {
        Term::Const(s)
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::Var(v)
    }
}

/// Formulas. There is no existential node: `exists` is written `not forall not`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bool(bool),
    /// A predicate application (a term of sort `Bool`).
    Atom(Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn atom(t: Term) -> Result<Formula, AstError> {
        match t.sort() {
            Sort::Bool => Ok(Formula::Atom(t)),
            other => Err(AstError::NotBoolean(other)),
        }
    }

    /// Binary predicate atom; panics if ill-sorted.
    pub fn pred(op: TheoryOp, lhs: Term, rhs: Term) -> Formula {
        assert!(op.is_predicate(), "`{}` is not a predicate", op.name());
        Formula::Atom(Term::binary(op, lhs, rhs))
    }

    pub fn lt(lhs: Term, rhs: Term) -> Formula {
        Self::pred(TheoryOp::Lt, lhs, rhs)
    }

    pub fn le(lhs: Term, rhs: Term) -> Formula {
        Self::pred(TheoryOp::Le, lhs, rhs)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        if lhs.sort().is_array() {
            Self::pred(TheoryOp::ArrayEq, lhs, rhs)
        } else {
            Self::pred(TheoryOp::Eq, lhs, rhs)
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::Bool(true),
            1 => fs.into_iter().next().unwrap(),
            _ => Formula::And(fs),
        }
    }

    pub fn or(fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::Bool(false),
            1 => fs.into_iter().next().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    /// Universal quantification; rejects an empty binder list and binders that
    /// repeat or shadow a variable bound inside `body`.
    pub fn forall(vars: Vec<Var>, body: Formula) -> Result<Formula, AstError> {
        if vars.is_empty() {
            return Err(AstError::EmptyBinder);
        }
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.clone()) {
                return Err(AstError::Shadowing(v.clone()));
            }
        }
        let mut inner = BTreeSet::new();
        body.collect_binders(&mut inner);
        if let Some(v) = vars.iter().find(|v| inner.contains(*v)) {
            return Err(AstError::Shadowing(v.clone()));
        }
        Ok(Formula::Forall(vars, Box::new(body)))
    }

    /// `exists vars. body`, encoded as `not forall vars. not body`.
    pub fn exists(vars: Vec<Var>, body: Formula) -> Result<Formula, AstError> {
        Ok(Formula::not(Formula::forall(vars, Formula::not(body))?))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Bool(_) | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Implies(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Forall(..) => false,
        }
    }

    /// Number of nodes; binary connectives with `n` operands count `n - 1`.
    /// Atoms count as their term, binder lists are free.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bool(_) => 1,
            Formula::Atom(t) => t.size(),
            Formula::Not(f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.len().saturating_sub(1) + fs.iter().map(Formula::size).sum::<usize>()
            }
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, body) => 1 + body.size(),
        }
    }

    /// Immediate subformulas, in path order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Bool(_) | Formula::Atom(_) => Vec::new(),
            Formula::Not(f) | Formula::Forall(_, f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) => vec![a, b],
        }
    }

    /// Calls `visit` on every atom term, in order.
    pub fn for_each_atom<'a>(&'a self, visit: &mut impl FnMut(&'a Term)) {
        match self {
            Formula::Atom(t) => visit(t),
            _ => self.children().into_iter().for_each(|c| c.for_each_atom(visit)),
        }
    }

    fn collect_binders(&self, out: &mut BTreeSet<Var>) {
        if let Formula::Forall(vars, _) = self {
            out.extend(vars.iter().cloned());
        }
        self.children().into_iter().for_each(|c| c.collect_binders(out));
    }

    /// Variables occurring free.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(t) => {
                let mut vs = BTreeSet::new();
                t.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Forall(vars, body) => {
                let depth = bound.len();
                bound.extend(vars.iter().cloned());
                body.collect_free_vars(bound, out);
                bound.truncate(depth);
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_free_vars(bound, out)),
        }
    }

    /// Rank-correct, closed, and no binder shadows an enclosing one.
    pub fn check_closed(&self) -> Result<(), AstError> {
        self.check_scoped(&mut Vec::new())
    }

    fn check_scoped(&self, bound: &mut Vec<Var>) -> Result<(), AstError> {
        match self {
            Formula::Bool(_) => Ok(()),
            Formula::Atom(t) => {
                t.check()?;
                if t.sort() != Sort::Bool {
                    return Err(AstError::NotBoolean(t.sort()));
                }
                let mut vs = BTreeSet::new();
                t.collect_vars(&mut vs);
                match vs.into_iter().find(|v| !bound.contains(v)) {
                    Some(v) => Err(AstError::Unbound(v)),
                    None => Ok(()),
                }
            }
            Formula::Forall(vars, body) => {
                if vars.is_empty() {
                    return Err(AstError::EmptyBinder);
                }
                let depth = bound.len();
                for v in vars {
                    if bound.contains(v) {
                        return Err(AstError::Shadowing(v.clone()));
                    }
                    bound.push(v.clone());
                }
                let r = body.check_scoped(bound);
                bound.truncate(depth);
                r
            }
            _ => self.children().into_iter().try_for_each(|c| c.check_scoped(bound)),
        }
    }
}

/// All free (uninterpreted, non-bound) symbols of `f`.
pub fn free_symbols(f: &Formula) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    f.for_each_atom(&mut |t| t.collect_symbols(&mut out));
    out
}

/// Replaces every free occurrence of `v` in `f` by the ground term `t`.
///
/// Fails if `t` is not a ground integer term, or if `f` re-binds `v` below
/// its free occurrences.
pub fn substitute(f: &Formula, v: &Var, t: &Term) -> Result<Formula, AstError> {
    if !t.is_ground() {
        return Err(AstError::NotGround(t.clone()));
    }
    let found = t.sort();
    if found != v.sort() {
        return Err(AstError::SubstitutionSort { var: v.clone(), found });
    }
    subst_formula(f, v, t)
}

fn subst_formula(f: &Formula, v: &Var, t: &Term) -> Result<Formula, AstError> {
    Ok(match f {
        Formula::Bool(_) => f.clone(),
        Formula::Atom(a) => Formula::Atom(a.substitute(v, t)),
        Formula::Not(g) => Formula::Not(Box::new(subst_formula(g, v, t)?)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| subst_formula(g, v, t)).collect::<Result<_, _>>()?),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| subst_formula(g, v, t)).collect::<Result<_, _>>()?),
        Formula::Implies(a, b) => {
            Formula::Implies(Box::new(subst_formula(a, v, t)?), Box::new(subst_formula(b, v, t)?))
        }
        Formula::Forall(vars, body) => {
            if vars.contains(v) {
                return Err(AstError::Shadowing(v.clone()));
            }
            Formula::Forall(vars.clone(), Box::new(subst_formula(body, v, t)?))
        }
    })
}

/// Free symbols split by the side of an interpolation problem they occur on.
/// Interpreted symbols are implicitly shared and never listed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolPartition {
    pub shared: BTreeSet<Symbol>,
    pub a_local: BTreeSet<Symbol>,
    pub b_local: BTreeSet<Symbol>,
}

impl SymbolPartition {
    pub fn of(a: &Formula, b: &Formula) -> Self {
        let fa = free_symbols(a);
        let fb = free_symbols(b);
        SymbolPartition {
            shared: fa.intersection(&fb).cloned().collect(),
            a_local: fa.difference(&fb).cloned().collect(),
            b_local: fb.difference(&fa).cloned().collect(),
        }
    }

    pub fn is_shared(&self, s: &Symbol) -> bool {
        self.shared.contains(s)
    }
}
