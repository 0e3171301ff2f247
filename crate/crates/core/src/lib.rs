//! Array property fragment over integer-indexed integer arrays with `diff`.
//!
//! Terms and formulas ([`ast`]), fragment recognition ([`fragment`]), finite
//! array values and models ([`array`], [`model`]), exact evaluation
//! ([`eval`]), stabilization indices over the model family
//! ([`stabilize`]) and the interpolation counterexample ([`interp`]).

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod array;
pub mod ast;
pub mod canon;
pub mod enumerate;
pub mod eval;
pub mod fragment;
pub mod interp;
pub mod model;
mod print;
pub mod stabilize;

pub use array::{DiffCase, FinArray};
pub use ast::{AstError, Formula, FuncSymbol, Sort, Symbol, SymbolPartition, Term, TheoryOp, Var};
pub use eval::{eval_formula, eval_term, EvalError, InstantiationSet, Value};
pub use fragment::{is_in_fragment, FragmentVerdict, Path, RejectReason};
pub use model::{paper_model, Model, PaperFamily};
