use std::fmt;

use apf_core::{Formula, Symbol};

/// A parsed SMT-LIB script: declarations, assertions and the options it set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub logic: Option<String>,
    /// `set-option` and `set-info` commands, without the outer parentheses.
    pub options: Vec<String>,
    pub declarations: Vec<Symbol>,
    pub assertions: Vec<Formula>,
}

impl Script {
    pub fn declared(&self, name: &str) -> Option<&Symbol> {
        self.declarations.iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(logic) = &self.logic {
            writeln!(f, "(set-logic {logic})")?;
        }
        for o in &self.options {
            writeln!(f, "({o})")?;
        }
        for s in &self.declarations {
            writeln!(f, "(declare-const {} {})", s.name(), s.sort())?;
        }
        for a in &self.assertions {
            writeln!(f, "(assert {a})")?;
        }
        Ok(())
    }
}
