//! Interpolation problems, the running example and refutation of candidate
//! interpolants against the model family.

use alloc::{
    string::{String, ToString},
    vec,
    vec::Vec,
};
use core::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::{
    ast::{free_symbols, substitute, Formula, Symbol, SymbolPartition, Term, TheoryOp, Var},
    canon::canon_formula,
    eval::{eval_body_at, eval_formula, eval_over_domain, instantiation_set_all, EvalError},
    fragment::{is_in_fragment, FragmentVerdict, RejectReason},
    model::{is_a_side, PaperFamily},
};

fn sym_a() -> Term {
    Term::Const(Symbol::array("a"))
}
fn sym_b() -> Term {
    Term::Const(Symbol::array("b"))
}

/// `forall i. a[i] < b[k]`
pub fn example_a() -> Formula {
    let body = Formula::lt(
        Term::select(sym_a(), Term::var("i")),
        Term::select(sym_b(), Term::Const(Symbol::int("k"))),
    );
    Formula::forall(vec![Var::new("i")], body).unwrap()
}

/// `forall j. not (a[l] < b[j])`
pub fn example_b() -> Formula {
    let body = Formula::not(Formula::lt(
        Term::select(sym_a(), Term::Const(Symbol::int("l"))),
        Term::select(sym_b(), Term::var("j")),
    ));
    Formula::forall(vec![Var::new("j")], body).unwrap()
}

fn a_below_b(i: &str, j: &str) -> Formula {
    Formula::lt(Term::select(sym_a(), Term::var(i)), Term::select(sym_b(), Term::var(j)))
}

/// `exists j. forall i. a[i] < b[j]`
pub fn example_i1() -> Formula {
    let inner = Formula::forall(vec![Var::new("i")], a_below_b("i", "j")).unwrap();
    Formula::exists(vec![Var::new("j")], inner).unwrap()
}

/// `forall i. exists j. a[i] < b[j]`
pub fn example_i2() -> Formula {
    let inner = Formula::exists(vec![Var::new("j")], a_below_b("i", "j")).unwrap();
    Formula::forall(vec![Var::new("i")], inner).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationProblem {
    pub a: Formula,
    pub b: Formula,
    pub partition: SymbolPartition,
}

impl InterpolationProblem {
    pub fn new(a: Formula, b: Formula) -> Self {
        let partition = SymbolPartition::of(&a, &b);
        InterpolationProblem { a, b, partition }
    }

    pub fn example() -> Self {
        Self::new(example_a(), example_b())
    }

    pub fn is_shared_formula(&self, f: &Formula) -> bool {
        free_symbols(f).iter().all(|s| self.partition.is_shared(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("no complementary ground literals found")]
    NoClash,
    #[error("`{formula}` has the wrong truth value in M_{index}")]
    ParityViolation { formula: String, index: u64 },
    #[error("`{formula}` was accepted by the fragment recognizer")]
    UnexpectedMembership { formula: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Complementary ground literals obtained by instantiating both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClashWitness {
    pub positive: Formula,
    pub negative: Formula,
    /// `(variable, term)` used on the A side and on the B side.
    pub a_instance: (Var, Term),
    pub b_instance: (Var, Term),
}

/// Ground integer terms used as `select` indices in `f`.
fn ground_index_terms(f: &Formula) -> Vec<Term> {
    fn walk(t: &Term, out: &mut Vec<Term>) {
        if let Term::App(op, args) = t {
            if *op == TheoryOp::Select && args[1].is_ground() && !out.contains(&args[1]) {
                out.push(args[1].clone());
            }
            args.iter().for_each(|a| walk(a, out));
        }
    }
    let mut out = Vec::new();
    f.for_each_atom(&mut |t| walk(t, &mut out));
    out
}

/// Ground literals of a conjunction, with their polarity.
fn literals(f: &Formula, positive: bool, out: &mut Vec<(Formula, bool)>) {
    match f {
        Formula::Atom(_) => out.push((canon_formula(f), positive)),
        Formula::Not(g) => literals(g, !positive, out),
        Formula::And(gs) if positive => gs.iter().for_each(|g| literals(g, positive, out)),
        Formula::Or(gs) if !positive => gs.iter().for_each(|g| literals(g, positive, out)),
        _ => {}
    }
}

fn instances(side: &Formula, terms: &[Term]) -> Vec<((Var, Term), Formula)> {
    let Formula::Forall(vars, body) = side else {
        return Vec::new();
    };
    let [v] = &vars[..] else {
        return Vec::new();
    };
    terms
        .iter()
        .filter_map(|t| substitute(body, v, t).ok().map(|g| ((v.clone(), t.clone()), g)))
        .collect()
}

/// Instantiates each side with the ground index terms of the other side and
/// returns the first pair of complementary literals.
pub fn find_clash(p: &InterpolationProblem) -> Result<ClashWitness, InterpError> {
    let a_inst = instances(&p.a, &ground_index_terms(&p.b));
    let b_inst = instances(&p.b, &ground_index_terms(&p.a));
    for (ai, af) in &a_inst {
        let mut la = Vec::new();
        literals(af, true, &mut la);
        for (bi, bf) in &b_inst {
            let mut lb = Vec::new();
            literals(bf, true, &mut lb);
            for (x, px) in &la {
                if let Some((_, _)) = lb.iter().find(|(y, py)| y == x && py != px) {
                    return Ok(ClashWitness {
                        positive: x.clone(),
                        negative: Formula::not(x.clone()),
                        a_instance: ai.clone(),
                        b_instance: bi.clone(),
                    });
                }
            }
        }
    }
    Err(InterpError::NoClash)
}

pub fn verify_example_unsat() -> Result<ClashWitness, InterpError> {
    find_clash(&InterpolationProblem::example())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    NotShared,
    NotInFragment(RejectReason),
    /// False in some even `M_i`, which satisfies `A`.
    FailsConditionI,
    /// The candidate holds together with `B` in some odd `M_i`.
    FailsConditionII,
    SurvivesHorizon,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::NotShared => "not-shared",
            Outcome::NotInFragment(_) => "not-in-fragment",
            Outcome::FailsConditionI => "fails-condition-i",
            Outcome::FailsConditionII => "fails-condition-ii",
            Outcome::SurvivesHorizon => "survives-horizon",
        }
    }

    pub fn is_refuted(self) -> bool {
        matches!(self, Outcome::FailsConditionI | Outcome::FailsConditionII)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateVerdict {
    pub candidate: Formula,
    pub outcome: Outcome,
    /// Index of the refuting model.
    pub witness: Option<u64>,
}

impl fmt::Display for CandidateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.candidate, self.outcome)?;
        if let Outcome::NotInFragment(r) = self.outcome {
            write!(f, " ({r})")?;
        }
        if let Some(i) = self.witness {
            let parity = if is_a_side(i) { "even" } else { "odd" };
            write!(f, " witness {i} ({parity})")?;
        }
        Ok(())
    }
}

/// Checks candidates for the running example against `M_0 ..= M_horizon`.
pub struct Refuter {
    problem: InterpolationProblem,
    family: PaperFamily,
}

impl Refuter {
    pub fn new(horizon: u64) -> Self {
        Refuter {
            problem: InterpolationProblem::example(),
            family: PaperFamily::new(horizon),
        }
    }

    pub fn family(&self) -> &PaperFamily {
        &self.family
    }

    pub fn check(&self, c: &Formula, horizon: u64) -> Result<CandidateVerdict, EvalError> {
        let verdict = |outcome, witness| CandidateVerdict {
            candidate: c.clone(),
            outcome,
            witness,
        };
        if !self.problem.is_shared_formula(c) {
            return Ok(verdict(Outcome::NotShared, None));
        }
        let FragmentVerdict { reason, .. } = is_in_fragment(c);
        if let Some(r) = reason {
            return Ok(verdict(Outcome::NotInFragment(r), None));
        }
        for i in 0..=horizon {
            let holds = eval_formula(&self.family.get(i), c)?;
            match (is_a_side(i), holds) {
                (true, false) => return Ok(verdict(Outcome::FailsConditionI, Some(i))),
                (false, true) => return Ok(verdict(Outcome::FailsConditionII, Some(i))),
                _ => {}
            }
        }
        Ok(verdict(Outcome::SurvivesHorizon, None))
    }
}

/// `check_candidate` for the running example; `p` only supplies the symbol
/// partition.
pub fn check_candidate(p: &InterpolationProblem, c: &Formula, horizon: u64) -> Result<CandidateVerdict, EvalError> {
    let r = Refuter {
        problem: p.clone(),
        family: PaperFamily::new(horizon),
    };
    r.check(c, horizon)
}

/// Truth values of the two alternating interpolants on `M_0 ..= M_horizon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternationReport {
    pub horizon: u64,
    pub i1: Vec<bool>,
    pub i2: Vec<bool>,
    /// Least `j` making the body of `I1` true, where `I1` holds.
    pub i1_witnesses: Vec<Option<BigInt>>,
    pub i1_verdict: FragmentVerdict,
    pub i2_verdict: FragmentVerdict,
}

/// Evaluates `exists j. forall i. ...` over the instantiation points, and
/// returns the first `j` that works.
fn i1_witness(m: &crate::model::Model, i1: &Formula) -> Result<Option<BigInt>, EvalError> {
    let set = instantiation_set_all(m, i1)?;
    let inner = Formula::forall(vec![Var::new("i")], a_below_b("i", "j")).unwrap();
    let j = [Var::new("j")];
    for p in set.points() {
        if eval_body_at(m, &j, &inner, core::slice::from_ref(p))? {
            return Ok(Some(p.clone()));
        }
    }
    Ok(None)
}

pub fn check_alternating_interpolants(horizon: u64) -> Result<AlternationReport, InterpError> {
    let (i1, i2) = (example_i1(), example_i2());
    let family = PaperFamily::new(horizon);
    let mut report = AlternationReport {
        horizon,
        i1: Vec::new(),
        i2: Vec::new(),
        i1_witnesses: Vec::new(),
        i1_verdict: is_in_fragment(&i1),
        i2_verdict: is_in_fragment(&i2),
    };
    for (f, verdict) in [(&i1, &report.i1_verdict), (&i2, &report.i2_verdict)] {
        if verdict.reason != Some(RejectReason::QuantifierAlternation) {
            return Err(InterpError::UnexpectedMembership { formula: f.to_string() });
        }
    }
    for i in 0..=horizon {
        let m = family.get(i);
        let v1 = eval_over_domain(
            &m,
            &i1,
            &instantiation_set_all(&m, &i1)?
                .points()
                .iter()
                .cloned()
                .collect::<Vec<_>>(),
        )?;
        let v2 = eval_over_domain(
            &m,
            &i2,
            &instantiation_set_all(&m, &i2)?
                .points()
                .iter()
                .cloned()
                .collect::<Vec<_>>(),
        )?;
        let w = i1_witness(&m, &i1)?;
        for (f, v) in [(&i1, v1), (&i2, v2)] {
            if v != is_a_side(i) {
                return Err(InterpError::ParityViolation {
                    formula: f.to_string(),
                    index: i,
                });
            }
        }
        if w.is_some() != v1 {
            return Err(InterpError::ParityViolation {
                formula: i1.to_string(),
                index: i,
            });
        }
        report.i1.push(v1);
        report.i2.push(v2);
        report.i1_witnesses.push(w);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_partition() {
        let p = InterpolationProblem::example();
        let names =
            |s: &alloc::collections::BTreeSet<Symbol>| s.iter().map(|x| x.name().to_string()).collect::<Vec<_>>();
        assert_eq!(names(&p.partition.shared), ["a", "b"]);
        assert_eq!(names(&p.partition.a_local), ["k"]);
        assert_eq!(names(&p.partition.b_local), ["l"]);
    }

    #[test]
    fn clash_of_the_example() {
        let w = verify_example_unsat().unwrap();
        let atom = Formula::lt(
            Term::select(sym_a(), Term::Const(Symbol::int("l"))),
            Term::select(sym_b(), Term::Const(Symbol::int("k"))),
        );
        assert_eq!(w.positive, atom);
        assert_eq!(w.negative, Formula::not(atom));
        assert_eq!(w.a_instance.1, Term::Const(Symbol::int("l")));
        assert_eq!(w.b_instance.1, Term::Const(Symbol::int("k")));
    }

    #[test]
    fn trivial_candidates() {
        let p = InterpolationProblem::example();
        let v = check_candidate(&p, &Formula::Bool(true), 64).unwrap();
        assert_eq!((v.outcome, v.witness), (Outcome::FailsConditionII, Some(1)));
        let v = check_candidate(&p, &Formula::Bool(false), 64).unwrap();
        assert_eq!((v.outcome, v.witness), (Outcome::FailsConditionI, Some(0)));
        let v = check_candidate(&p, &example_a(), 64).unwrap();
        assert_eq!(v.outcome, Outcome::NotShared);
        let v = check_candidate(&p, &example_i1(), 64).unwrap();
        assert_eq!(v.outcome, Outcome::NotInFragment(RejectReason::QuantifierAlternation));
    }

    #[test]
    fn all_pairs_below() {
        let body = Formula::implies(
            Formula::Bool(true),
            Formula::le(
                Term::select(sym_a(), Term::var("i")),
                Term::select(sym_b(), Term::var("j")),
            ),
        );
        let c = Formula::forall(vec![Var::new("i"), Var::new("j")], body).unwrap();
        let v = check_candidate(&InterpolationProblem::example(), &c, 64).unwrap();
        assert_eq!((v.outcome, v.witness), (Outcome::FailsConditionII, Some(1)));
    }

    #[test]
    fn alternating_interpolants_separate() {
        let r = check_alternating_interpolants(12).unwrap();
        assert!(r.i1[2] && !r.i1[3]);
        assert_eq!(r.i1_witnesses[2], Some(BigInt::from(2)));
        assert_eq!(r.i2_verdict.reason, Some(RejectReason::QuantifierAlternation));
    }
}
