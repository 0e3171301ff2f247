//! SMT-LIB rendering of terms and formulas.
//!
//! Negative literals print as `(- n)`; `exists` has no node of its own and
//! prints as `(not (forall ... (not ...)))`.

use core::fmt;

use num_traits::Signed;

use crate::ast::{Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(v) if v.is_negative() => write!(f, "(- {})", v.abs()),
            Term::Int(v) => write!(f, "{v}"),
            Term::Const(s) => write!(f, "{s}"),
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) => {
                write!(f, "({}", op.name())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bool(b) => write!(f, "{b}"),
            Formula::Atom(t) => write!(f, "{t}"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(fs) if fs.is_empty() => f.write_str("true"),
            Formula::Or(fs) if fs.is_empty() => f.write_str("false"),
            Formula::And(fs) | Formula::Or(fs) => {
                let name = if matches!(self, Formula::And(_)) { "and" } else { "or" };
                write!(f, "({name}")?;
                for g in fs {
                    write!(f, " {g}")?;
                }
                f.write_str(")")
            }
            Formula::Implies(a, b) => write!(f, "(=> {a} {b})"),
            Formula::Forall(vars, body) => {
                f.write_str("(forall (")?;
                for (n, v) in vars.iter().enumerate() {
                    if n > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "({v} Int)")?;
                }
                write!(f, ") {body})")
            }
        }
    }
}
