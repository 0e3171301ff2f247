//! Stabilization indices for shared terms and formulas over the model family.
//!
//! A shared integer term has a value that is constant from some `M_i` on
//! (P1). A shared array term `t` satisfies, from some `i` on, that
//! `t^{M_i'}` and `t^{M_i''}` agree at every `j <= i'` for `i' <= i''` (P2a),
//! and that `t^{M_i'}` repeats its value at `i'` above `i'` (P2b). A shared
//! formula has a constant truth value from some `i` on. Indices follow the
//! structural recursion over terms; `diff` and array equality need an
//! empirical search, and reports that relied on it without finding a
//! difference are marked conditional.

use alloc::{
    string::{String, ToString},
    vec::Vec,
};
use core::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::{
    ast::{free_symbols, Formula, Sort, Symbol, Term, TheoryOp},
    eval::{eval_formula, eval_term, guard_terms, EvalError, Value},
    fragment::is_in_fragment,
    model::PaperFamily,
};

pub const DEFAULT_HORIZON: u64 = 64;
pub const DEFAULT_EXTRA: u64 = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subject {
    Term(Term),
    Formula(Formula),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Term(t) => write!(f, "{t}"),
            Subject::Formula(g) => write!(f, "{g}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabProperty {
    /// Integer value constant across models.
    P1Scalar,
    /// Array prefix agreement and suffix repetition.
    P2Array,
    /// Truth value constant across models.
    FConstantValue,
}

impl StabProperty {
    pub fn as_str(self) -> &'static str {
        match self {
            StabProperty::P1Scalar => "P1-scalar",
            StabProperty::P2Array => "P2-array",
            StabProperty::FConstantValue => "F-constant-value",
        }
    }
}

impl fmt::Display for StabProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationReport {
    pub subject: Subject,
    pub index: u64,
    pub property: StabProperty,
    pub verified_horizon: u64,
    pub conditional: bool,
    /// Value at `M_index`: the integer for P1, the truth value for F.
    pub stable_value: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabError {
    #[error("`{0}` is not over the shared symbols a and b")]
    NonShared(String),
    #[error("computed index {index} exceeds horizon {horizon}")]
    IndexBeyondHorizon { index: u64, horizon: u64 },
    #[error("stabilization check failed for `{0}`")]
    VerificationFailure(String),
    #[error("not a fragment formula: `{0}`")]
    NotInFragment(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `true` for the array constants `a` and `b`, the symbols shared by both
/// sides of the running example.
pub fn is_shared_symbol(s: &Symbol) -> bool {
    matches!(s.name(), "a" | "b") && *s.sort() == Sort::int_array()
}

fn require_shared_term(t: &Term) -> Result<(), StabError> {
    let mut syms = Default::default();
    t.collect_symbols(&mut syms);
    if !t.is_ground() || !syms.iter().all(is_shared_symbol) {
        return Err(StabError::NonShared(t.to_string()));
    }
    Ok(())
}

fn require_shared_formula(f: &Formula) -> Result<(), StabError> {
    if !free_symbols(f).iter().all(is_shared_symbol) || !f.free_vars().is_empty() {
        return Err(StabError::NonShared(f.to_string()));
    }
    Ok(())
}

/// Nonnegative part of an integer as a model index; saturates on overflow.
fn as_index(v: &BigInt) -> u64 {
    if v <= &BigInt::zero() {
        0
    } else {
        v.to_u64().unwrap_or(u64::MAX)
    }
}

/// Computes and checks stabilization reports, caching the model family.
pub struct Stabilizer {
    family: PaperFamily,
}

impl Stabilizer {
    pub fn new(max_i: u64) -> Self {
        Stabilizer {
            family: PaperFamily::new(max_i),
        }
    }

    pub fn family(&self) -> &PaperFamily {
        &self.family
    }

    fn value(&self, i: u64, t: &Term) -> Result<Value, StabError> {
        Ok(eval_term(&self.family.get(i), t)?)
    }

    fn int_at(&self, i: u64, t: &Term) -> Result<BigInt, StabError> {
        match self.value(i, t)? {
            Value::Int(v) => Ok(v),
            _ => Err(StabError::Eval(EvalError::IllSorted(t.to_string()))),
        }
    }

    fn truth_at(&self, i: u64, f: &Formula) -> Result<bool, StabError> {
        Ok(eval_formula(&self.family.get(i), f)?)
    }

    /// First `i` in `[from, horizon]` where `s` and `t` denote different
    /// arrays.
    fn first_difference(&self, s: &Term, t: &Term, from: u64, horizon: u64) -> Result<Option<u64>, StabError> {
        for i in from..=horizon {
            if self.value(i, s)? != self.value(i, t)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn check_horizon(index: u64, horizon: u64) -> Result<u64, StabError> {
        if index > horizon {
            Err(StabError::IndexBeyondHorizon { index, horizon })
        } else {
            Ok(index)
        }
    }

    /// Index for a ground shared term (of any sort) by the structural rules.
    fn term_index(&self, t: &Term, horizon: u64, conditional: &mut bool) -> Result<u64, StabError> {
        let Term::App(op, args) = t else {
            return Ok(0);
        };
        let sub = args
            .iter()
            .map(|a| self.term_index(a, horizon, conditional))
            .collect::<Result<Vec<_>, _>>()?;
        let i0 = sub.iter().copied().max().unwrap_or(0);
        let index = match op {
            TheoryOp::Select => {
                let i = Self::check_horizon(i0, horizon)?;
                i0.max(as_index(&self.int_at(i, &args[1])?))
            }
            TheoryOp::Store => {
                let i = Self::check_horizon(i0, horizon)?;
                i0.max(as_index(&(self.int_at(i, &args[1])? + 1u32)))
            }
            TheoryOp::Diff | TheoryOp::ArrayEq => {
                let i = Self::check_horizon(i0, horizon)?;
                match self.first_difference(&args[0], &args[1], i, horizon)? {
                    Some(d) => d,
                    None => {
                        *conditional = true;
                        i0
                    }
                }
            }
            _ => i0,
        };
        Self::check_horizon(index, horizon)
    }

    pub fn stab_index_term(&self, t: &Term, horizon: u64) -> Result<StabilizationReport, StabError> {
        require_shared_term(t)?;
        let mut conditional = false;
        let index = self.term_index(t, horizon, &mut conditional)?;
        let (property, stable_value) = match t.sort() {
            Sort::Array(..) => (StabProperty::P2Array, None),
            Sort::Int => (StabProperty::P1Scalar, Some(self.value(index, t)?)),
            Sort::Bool => (StabProperty::FConstantValue, Some(self.value(index, t)?)),
        };
        self.certified(StabilizationReport {
            subject: Subject::Term(t.clone()),
            index,
            property,
            verified_horizon: horizon,
            conditional,
            stable_value,
        })
    }

    /// Index for an array property, found by searching for the first model
    /// past the guard thresholds that falsifies it.
    pub fn stab_index_property(&self, phi: &Formula, horizon: u64) -> Result<StabilizationReport, StabError> {
        require_shared_formula(phi)?;
        if !is_in_fragment(phi).member() || !matches!(phi, Formula::Forall(..)) {
            return Err(StabError::NotInFragment(phi.to_string()));
        }
        let mut conditional = false;
        let mut i0 = 0;
        for t in maximal_ground_terms(phi) {
            i0 = i0.max(self.term_index(t, horizon, &mut conditional)?);
        }
        let mut i1 = i0;
        for t in guard_terms(phi) {
            i1 = i1.max(as_index(&(self.int_at(i0, t)? + 1u32)));
        }
        let i1 = Self::check_horizon(i1, horizon)?;
        let mut found = None;
        for i in i1..=horizon {
            if !self.truth_at(i, phi)? {
                found = Some(i);
                break;
            }
        }
        let (index, value) = match found {
            Some(i2) => (i2, false),
            None => {
                conditional = true;
                (i1, true)
            }
        };
        self.certified(StabilizationReport {
            subject: Subject::Formula(phi.clone()),
            index,
            property: StabProperty::FConstantValue,
            verified_horizon: horizon,
            conditional,
            stable_value: Some(Value::Bool(value)),
        })
    }

    /// Index for a Boolean combination of properties and ground atoms: the
    /// maximum over its components.
    pub fn stab_index_formula(&self, f: &Formula, horizon: u64) -> Result<StabilizationReport, StabError> {
        require_shared_formula(f)?;
        if !is_in_fragment(f).member() {
            return Err(StabError::NotInFragment(f.to_string()));
        }
        if let Formula::Forall(..) = f {
            return self.stab_index_property(f, horizon);
        }
        let mut conditional = false;
        let index = self.formula_index(f, horizon, &mut conditional)?;
        let value = self.truth_at(index, f)?;
        self.certified(StabilizationReport {
            subject: Subject::Formula(f.clone()),
            index,
            property: StabProperty::FConstantValue,
            verified_horizon: horizon,
            conditional,
            stable_value: Some(Value::Bool(value)),
        })
    }

    fn formula_index(&self, f: &Formula, horizon: u64, conditional: &mut bool) -> Result<u64, StabError> {
        match f {
            Formula::Bool(_) => Ok(0),
            Formula::Atom(t) => self.term_index(t, horizon, conditional),
            Formula::Forall(..) => {
                let r = self.stab_index_property(f, horizon)?;
                *conditional |= r.conditional;
                Ok(r.index)
            }
            _ => {
                let mut index = 0;
                for c in f.children() {
                    index = index.max(self.formula_index(c, horizon, conditional)?);
                }
                Ok(index)
            }
        }
    }

    fn certified(&self, r: StabilizationReport) -> Result<StabilizationReport, StabError> {
        if self.verify(&r, 0) {
            Ok(r)
        } else {
            Err(StabError::VerificationFailure(r.subject.to_string()))
        }
    }

    /// Re-checks the report's property on `[index, verified_horizon + extra]`.
    pub fn verify(&self, r: &StabilizationReport, extra: u64) -> bool {
        if r.index > r.verified_horizon {
            return false;
        }
        let last = r.verified_horizon.saturating_add(extra);
        match (&r.subject, r.property) {
            (Subject::Term(t), StabProperty::P2Array) => self.verify_array(t, r.index, last),
            (Subject::Term(t), _) => {
                let first = match self.value(r.index, t) {
                    Ok(v) => v,
                    Err(_) => return false,
                };
                if r.stable_value.as_ref().is_some_and(|v| *v != first) {
                    return false;
                }
                (r.index + 1..=last).all(|i| self.value(i, t).ok().as_ref() == Some(&first))
            }
            (Subject::Formula(f), _) => {
                let eval = |i| -> Option<bool> {
                    let m = self.family.get(i);
                    if matches!(f, Formula::Forall(..)) || is_in_fragment(f).member() {
                        eval_formula(&m, f).ok()
                    } else {
                        None
                    }
                };
                let Some(first) = eval(r.index) else {
                    return false;
                };
                if r.stable_value.as_ref().is_some_and(|v| *v != Value::Bool(first)) {
                    return false;
                }
                (r.index + 1..=last).all(|i| eval(i) == Some(first))
            }
        }
    }

    fn verify_array(&self, t: &Term, from: u64, last: u64) -> bool {
        let arrays: Option<Vec<_>> = (from..=last)
            .map(|i| match self.value(i, t) {
                Ok(Value::Array(a)) => Some(a),
                _ => None,
            })
            .collect();
        let Some(arrays) = arrays else {
            return false;
        };
        arrays.iter().enumerate().all(|(n, a)| {
            let i = BigInt::from(from + n as u64);
            let suffix = a.constant_above(&i);
            let prefix = arrays.get(n + 1).map_or(true, |next| a.agrees_up_to(next, &i));
            suffix && prefix
        })
    }
}

/// Ground subterms of `f` not contained in a larger ground subterm.
pub fn maximal_ground_terms(f: &Formula) -> Vec<&Term> {
    fn walk<'t>(t: &'t Term, out: &mut Vec<&'t Term>) {
        if t.is_ground() {
            out.push(t);
        } else if let Term::App(_, args) = t {
            for a in args {
                walk(a, out);
            }
        }
    }
    let mut out = Vec::new();
    f.for_each_atom(&mut |t| walk(t, &mut out));
    out
}

pub fn stab_index_term(t: &Term, horizon: u64) -> Result<StabilizationReport, StabError> {
    Stabilizer::new(horizon).stab_index_term(t, horizon)
}

pub fn stab_index_property(phi: &Formula, horizon: u64) -> Result<StabilizationReport, StabError> {
    Stabilizer::new(horizon).stab_index_property(phi, horizon)
}

pub fn stab_index_formula(f: &Formula, horizon: u64) -> Result<StabilizationReport, StabError> {
    Stabilizer::new(horizon).stab_index_formula(f, horizon)
}

pub fn verify_stabilization(r: &StabilizationReport, extra: u64) -> bool {
    Stabilizer::new(r.verified_horizon.saturating_add(extra)).verify(r, extra)
}

impl fmt::Display for StabilizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: index {} {}", self.subject, self.index, self.property)?;
        if let Some(v) = &self.stable_value {
            write!(f, " value {v}")?;
        }
        write!(f, " verified to {}", self.verified_horizon)?;
        if self.conditional {
            f.write_str(" (conditional)")?;
        }
        Ok(())
    }
}
