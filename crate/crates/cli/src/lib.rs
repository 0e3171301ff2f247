//! Front end for `apf-core`: the SMT-LIB subset reader and printer, JSON
//! model files and reports, and the `apf` command.

pub mod cli;
pub mod json;
pub mod parse;
pub mod samples;
pub mod script;

pub use cli::{refute_all, run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
pub use parse::{parse_formula, parse_script, ParseError, Pos};
pub use script::Script;
