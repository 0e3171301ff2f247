//! Reader for the SMT-LIB subset: `set-logic`, `set-option`, `set-info`,
//! `declare-const`, `declare-fun` with no arguments, `assert`, `check-sat`
//! and `exit`.

use std::fmt;

use apf_core::{AstError, Formula, Sort, Symbol, Term, TheoryOp, Var};
use num_bigint::BigInt;
use thiserror::Error;

use crate::script::Script;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: lexical error: {msg}")]
    Lexical { pos: Pos, msg: String },
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: unknown symbol `{name}`")]
    UnknownSymbol { pos: Pos, name: String },
    #[error("{pos}: sort error: {msg}")]
    Sort { pos: Pos, msg: String },
    #[error("{pos}: arity error: {msg}")]
    Arity { pos: Pos, msg: String },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Lexical { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::Sort { pos, .. }
            | ParseError::Arity { pos, .. } => *pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(s, _) => f.write_str(s),
            Sexp::List(items, _) => {
                f.write_str("(")?;
                for (n, x) in items.iter().enumerate() {
                    if n > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { pos, msg: msg.into() }
}

struct Lexer<'t> {
    chars: std::iter::Peekable<std::str::Chars<'t>>,
    pos: Pos,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn atom(&mut self, start: Pos) -> Result<Sexp, ParseError> {
        let mut text = String::new();
        match self.chars.peek() {
            Some('"') => {
                text.push(self.bump().unwrap());
                loop {
                    match self.bump() {
                        Some('"') => {
                            text.push('"');
                            // `""` is an escaped quote.
                            if self.chars.peek() == Some(&'"') {
                                text.push(self.bump().unwrap());
                                continue;
                            }
                            break;
                        }
                        Some(c) => text.push(c),
                        None => {
                            return Err(ParseError::Lexical {
                                pos: start,
                                msg: "unterminated string".into(),
                            })
                        }
                    }
                }
            }
            Some('|') => {
                self.bump();
                loop {
                    match self.bump() {
                        Some('|') => break,
                        Some(c) => text.push(c),
                        None => {
                            return Err(ParseError::Lexical {
                                pos: start,
                                msg: "unterminated quoted symbol".into(),
                            })
                        }
                    }
                }
            }
            _ => {
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    if c.is_control() || c == '"' || c == '|' {
                        return Err(ParseError::Lexical {
                            pos: self.pos,
                            msg: format!("unexpected character {c:?}"),
                        });
                    }
                    text.push(c);
                    self.bump();
                }
            }
        }
        Ok(Sexp::Atom(text, start))
    }

    /// Reads the next complete s-expression, or `None` at end of input.
    fn next(&mut self) -> Result<Option<Sexp>, ParseError> {
        self.skip_blank();
        let start = self.pos;
        match self.chars.peek() {
            None => Ok(None),
            Some(')') => Err(syntax(start, "unbalanced `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.chars.peek() {
                        None => return Err(syntax(start, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Some(Sexp::List(items, start)));
                        }
                        _ => items.push(self.next()?.expect("input is not empty")),
                    }
                }
            }
            Some(_) => self.atom(start).map(Some),
        }
    }
}

/// Splits `text` into top-level s-expressions.
pub fn read_sexps(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut lx = Lexer {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let mut out = Vec::new();
    while let Some(s) = lx.next()? {
        out.push(s);
    }
    Ok(out)
}

enum Expr {
    Term(Term),
    Formula(Formula),
}

struct Converter<'s> {
    script: &'s Script,
    scope: Vec<Var>,
}

fn sort_error(pos: Pos, e: AstError) -> ParseError {
    match e {
        AstError::Arity { .. } => ParseError::Arity {
            pos,
            msg: e.to_string(),
        },
        _ => ParseError::Sort {
            pos,
            msg: e.to_string(),
        },
    }
}

fn parse_sort(s: &Sexp) -> Result<Sort, ParseError> {
    match s {
        Sexp::Atom(a, _) if a == "Int" => Ok(Sort::Int),
        Sexp::List(items, _) => match &items[..] {
            [Sexp::Atom(h, _), i, e] if h == "Array" => {
                let (i, e) = (parse_sort(i)?, parse_sort(e)?);
                if i != Sort::Int || e != Sort::Int {
                    return Err(ParseError::Sort {
                        pos: s.pos(),
                        msg: "only (Array Int Int) is supported".into(),
                    });
                }
                Ok(Sort::int_array())
            }
            _ => Err(ParseError::Sort {
                pos: s.pos(),
                msg: format!("unsupported sort `{s}`"),
            }),
        },
        _ => Err(ParseError::Sort {
            pos: s.pos(),
            msg: format!("unsupported sort `{s}`"),
        }),
    }
}

fn numeral(a: &str) -> Option<BigInt> {
    if !a.is_empty() && a.bytes().all(|b| b.is_ascii_digit()) && (a == "0" || !a.starts_with('0')) {
        a.parse().ok()
    } else {
        None
    }
}

impl Converter<'_> {
    fn term(&mut self, s: &Sexp) -> Result<Term, ParseError> {
        match self.expr(s)? {
            Expr::Term(t) => Ok(t),
            Expr::Formula(_) => Err(ParseError::Sort {
                pos: s.pos(),
                msg: format!("expected a term, found formula `{s}`"),
            }),
        }
    }

    fn formula(&mut self, s: &Sexp) -> Result<Formula, ParseError> {
        match self.expr(s)? {
            Expr::Formula(f) => Ok(f),
            Expr::Term(t) => Formula::atom(t).map_err(|e| sort_error(s.pos(), e)),
        }
    }

    fn app(&mut self, op: TheoryOp, args: &[Sexp], pos: Pos) -> Result<Term, ParseError> {
        let ts = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
        Term::app(op, ts).map_err(|e| sort_error(pos, e))
    }

    /// Left-associated application of a binary operator to two or more
    /// arguments.
    fn fold(&mut self, op: TheoryOp, args: &[Sexp], pos: Pos) -> Result<Term, ParseError> {
        if args.len() < 2 {
            return self.app(op, args, pos);
        }
        let mut acc = self.term(&args[0])?;
        for a in &args[1..] {
            let t = self.term(a)?;
            acc = Term::app(op, vec![acc, t]).map_err(|e| sort_error(pos, e))?;
        }
        Ok(acc)
    }

    fn compare(&mut self, op: TheoryOp, args: &[Sexp], flip: bool, pos: Pos) -> Result<Expr, ParseError> {
        let ts = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
        if ts.len() < 2 {
            return Term::app(op, ts).map(Expr::Term).map_err(|e| sort_error(pos, e));
        }
        let mut parts = Vec::new();
        for w in ts.windows(2) {
            let (x, y) = if flip {
                (w[1].clone(), w[0].clone())
            } else {
                (w[0].clone(), w[1].clone())
            };
            let op = if op == TheoryOp::Eq && x.sort().is_array() {
                TheoryOp::ArrayEq
            } else {
                op
            };
            let t = Term::app(op, vec![x, y]).map_err(|e| sort_error(pos, e))?;
            parts.push(Formula::Atom(t));
        }
        Ok(Expr::Formula(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        }))
    }

    fn binders(&self, s: &Sexp) -> Result<Vec<Var>, ParseError> {
        let Sexp::List(items, _) = s else {
            return Err(syntax(s.pos(), "expected a binder list"));
        };
        items
            .iter()
            .map(|b| match b {
                Sexp::List(pair, _) => match &pair[..] {
                    [Sexp::Atom(name, _), sort] => {
                        if parse_sort(sort)? != Sort::Int {
                            return Err(ParseError::Sort {
                                pos: sort.pos(),
                                msg: "quantified variables must be Int".into(),
                            });
                        }
                        Ok(Var::new(name))
                    }
                    _ => Err(syntax(b.pos(), "expected (name Int)")),
                },
                _ => Err(syntax(b.pos(), "expected (name Int)")),
            })
            .collect()
    }

    fn quantifier(&mut self, exists: bool, args: &[Sexp], pos: Pos) -> Result<Expr, ParseError> {
        let [binders, body] = args else {
            return Err(syntax(pos, "quantifier takes a binder list and a body"));
        };
        let vars = self.binders(binders)?;
        let depth = self.scope.len();
        self.scope.extend(vars.iter().cloned());
        let body = self.formula(body);
        self.scope.truncate(depth);
        let body = body?;
        let f = if exists {
            Formula::exists(vars, body)
        } else {
            Formula::forall(vars, body)
        };
        f.map(Expr::Formula).map_err(|e| sort_error(pos, e))
    }

    fn symbol(&self, name: &str, pos: Pos) -> Result<Expr, ParseError> {
        if let Some(v) = self.scope.iter().rev().find(|v| v.name() == name) {
            return Ok(Expr::Term(Term::Var(v.clone())));
        }
        match name {
            "true" => return Ok(Expr::Formula(Formula::Bool(true))),
            "false" => return Ok(Expr::Formula(Formula::Bool(false))),
            _ => {}
        }
        if let Some(n) = numeral(name) {
            return Ok(Expr::Term(Term::Int(n)));
        }
        match self.script.declared(name) {
            Some(s) => Ok(Expr::Term(Term::Const(s.clone()))),
            None => Err(ParseError::UnknownSymbol {
                pos,
                name: name.to_string(),
            }),
        }
    }

    fn expr(&mut self, s: &Sexp) -> Result<Expr, ParseError> {
        let (items, pos) = match s {
            Sexp::Atom(a, pos) => return self.symbol(a, *pos),
            Sexp::List(items, pos) => (items, *pos),
        };
        let Some((Sexp::Atom(head, hpos), args)) = items.split_first() else {
            return Err(syntax(pos, "expected an operator application"));
        };
        let term = |t: Result<Term, ParseError>| t.map(Expr::Term);
        match head.as_str() {
            "forall" => self.quantifier(false, args, pos),
            "exists" => self.quantifier(true, args, pos),
            "not" => match args {
                [x] => Ok(Expr::Formula(Formula::Not(Box::new(self.formula(x)?)))),
                _ => Err(syntax(pos, "`not` takes one argument")),
            },
            "and" | "or" => {
                let fs = args.iter().map(|a| self.formula(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(Expr::Formula(if head == "and" {
                    Formula::And(fs)
                } else {
                    Formula::Or(fs)
                }))
            }
            "=>" => {
                if args.len() < 2 {
                    return Err(syntax(pos, "`=>` takes at least two arguments"));
                }
                let mut fs = args.iter().map(|a| self.formula(a)).collect::<Result<Vec<_>, _>>()?;
                let mut acc = fs.pop().unwrap();
                while let Some(f) = fs.pop() {
                    acc = Formula::Implies(Box::new(f), Box::new(acc));
                }
                Ok(Expr::Formula(acc))
            }
            "<" => self.compare(TheoryOp::Lt, args, false, pos),
            "<=" => self.compare(TheoryOp::Le, args, false, pos),
            ">" => self.compare(TheoryOp::Lt, args, true, pos),
            ">=" => self.compare(TheoryOp::Le, args, true, pos),
            "=" => self.compare(TheoryOp::Eq, args, false, pos),
            "+" => term(self.fold(TheoryOp::Add, args, pos)),
            "*" => term(self.fold(TheoryOp::Mul, args, pos)),
            "-" => match args {
                [Sexp::Atom(a, _)] if numeral(a).is_some() => Ok(Expr::Term(Term::Int(-numeral(a).unwrap()))),
                [x] => {
                    let t = self.term(x)?;
                    term(Term::app(TheoryOp::Sub, vec![Term::int(0), t]).map_err(|e| sort_error(pos, e)))
                }
                _ => term(self.fold(TheoryOp::Sub, args, pos)),
            },
            "select" => term(self.app(TheoryOp::Select, args, pos)),
            "store" => term(self.app(TheoryOp::Store, args, pos)),
            "diff" => term(self.app(TheoryOp::Diff, args, pos)),
            other => Err(match self.script.declared(other) {
                Some(_) => ParseError::Sort {
                    pos: *hpos,
                    msg: format!("`{other}` is a constant and takes no arguments"),
                },
                None => ParseError::UnknownSymbol {
                    pos: *hpos,
                    name: other.to_string(),
                },
            }),
        }
    }
}

fn declare(script: &mut Script, name: &Sexp, sort: &Sexp) -> Result<(), ParseError> {
    let Sexp::Atom(n, pos) = name else {
        return Err(syntax(name.pos(), "expected a symbol name"));
    };
    if script.declared(n).is_some() {
        return Err(syntax(*pos, format!("`{n}` is already declared")));
    }
    if matches!(n.as_str(), "select" | "store" | "diff" | "true" | "false") || numeral(n).is_some() {
        return Err(syntax(*pos, format!("`{n}` cannot be declared")));
    }
    let sort = parse_sort(sort)?;
    script.declarations.push(Symbol::new(n, sort));
    Ok(())
}

/// Parses a script in the supported SMT-LIB subset.
pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut script = Script::default();
    for cmd in read_sexps(text)? {
        let Sexp::List(items, pos) = &cmd else {
            return Err(syntax(cmd.pos(), "expected a command"));
        };
        let Some((Sexp::Atom(head, _), args)) = items.split_first() else {
            return Err(syntax(*pos, "expected a command"));
        };
        match (head.as_str(), args) {
            ("set-logic", [Sexp::Atom(l, _)]) => script.logic = Some(l.clone()),
            ("set-option" | "set-info", [_, ..]) => {
                let inner = cmd.to_string();
                script.options.push(inner[1..inner.len() - 1].to_string());
            }
            ("declare-const", [name, sort]) => declare(&mut script, name, sort)?,
            ("declare-fun", [name, Sexp::List(params, _), sort]) if params.is_empty() => {
                declare(&mut script, name, sort)?
            }
            ("declare-fun", [_, Sexp::List(_, ppos), _]) => {
                return Err(syntax(*ppos, "only nullary functions are supported"));
            }
            ("assert", [body]) => {
                let f = Converter {
                    script: &script,
                    scope: Vec::new(),
                }
                .formula(body)?;
                script.assertions.push(f);
            }
            ("check-sat" | "exit" | "get-model", []) => {}
            (
                "set-logic" | "set-option" | "set-info" | "declare-const" | "declare-fun" | "assert" | "check-sat"
                | "exit" | "get-model",
                _,
            ) => return Err(syntax(*pos, format!("malformed `{head}` command"))),
            _ => return Err(syntax(*pos, format!("unsupported command `{head}`"))),
        }
    }
    Ok(script)
}

/// Parses one formula against the declarations of `script`.
pub fn parse_formula(script: &Script, text: &str) -> Result<Formula, ParseError> {
    let sexps = read_sexps(text)?;
    let [s] = &sexps[..] else {
        return Err(syntax(Pos { line: 1, col: 1 }, "expected exactly one formula"));
    };
    Converter {
        script,
        scope: Vec::new(),
    }
    .formula(s)
}
