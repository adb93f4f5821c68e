use std::fmt::Write;

use thiserror::Error;

use super::system::{CrsRule, CrsSystem, Signature, ValidationError};
use super::term::{CrsTerm, Sym};
use crate::name::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("term {index} contains the variable `{var}`")]
    OpenTerm { index: usize, var: Name },
}

impl TextError {
    pub fn is_syntax(&self) -> bool {
        matches!(self, TextError::Syntax { .. })
    }
}

/// A parsed `.trs` file: a validated system plus the closed terms listed in
/// `term …;` declarations.
#[derive(Debug, Clone)]
pub struct Document {
    pub system: CrsSystem,
    pub terms: Vec<CrsTerm>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    Punct(&'static str),
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(src: &str) -> Result<Lexer, TextError> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1, 1);
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let err = |line, column, message: String| TextError::Syntax {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - s;
            toks.push((Tok::Ident(chars[s..i].iter().collect()), start.0, start.1));
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - s;
            let text: String = chars[s..i].iter().collect();
            let n = text
                .parse()
                .map_err(|_| err(start.0, start.1, format!("number `{text}` out of range")))?;
            toks.push((Tok::Num(n), start.0, start.1));
            continue;
        }
        let punct = match c {
            '(' => "(",
            ')' => ")",
            ',' => ",",
            ';' => ";",
            '/' => "/",
            '-' if chars.get(i + 1) == Some(&'>') => "->",
            _ => return Err(err(line, col, format!("unexpected character `{c}`"))),
        };
        i += punct.len();
        col += punct.len();
        toks.push((Tok::Punct(punct), start.0, start.1));
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: (line, col),
    })
}

impl Lexer {
    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> TextError {
        let (line, column) = self.here();
        TextError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn punct(&mut self, p: &str) -> Result<(), TextError> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`")))
        }
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, TextError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected identifier")),
        }
    }

    fn number(&mut self) -> Result<usize, TextError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("expected arity")),
        }
    }

    fn raw_term(&mut self) -> Result<Raw, TextError> {
        let name = self.ident()?;
        if !self.eat("(") {
            return Ok(Raw { name, args: None });
        }
        let mut args = Vec::new();
        if !self.eat(")") {
            loop {
                args.push(self.raw_term()?);
                if self.eat(")") {
                    break;
                }
                self.punct(",")?;
            }
        }
        Ok(Raw {
            name,
            args: Some(args),
        })
    }
}

/// A term before symbols are resolved against the declarations.
struct Raw {
    name: String,
    args: Option<Vec<Raw>>,
}

fn resolve(sig: &Signature, raw: &Raw) -> Result<CrsTerm, ValidationError> {
    let name = Name::new(&raw.name);
    match (sig.get(name), &raw.args) {
        (None, None) => Ok(CrsTerm::var(name)),
        (None, Some(_)) => Err(ValidationError::UnknownSymbol(name)),
        (Some(sym), args) => {
            let args = args.as_deref().unwrap_or(&[]);
            if args.len() != sym.arity {
                return Err(ValidationError::ArityMismatch {
                    symbol: name,
                    expected: sym.arity,
                    found: args.len(),
                });
            }
            let children = args
                .iter()
                .map(|a| resolve(sig, a))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(CrsTerm::node(sym, children))
        }
    }
}

/// Parses a `.trs` document:
///
/// ```text
/// constructor zero/0;
/// constructor succ/1;
/// function add/2;
/// rule add(zero, y) -> y;
/// rule add(succ(x), y) -> succ(add(x, y));
/// term add(succ(zero), zero);
/// ```
///
/// Identifiers that are not declared symbols are variables. Declarations
/// may appear in any order.
pub fn parse_system(src: &str) -> Result<Document, TextError> {
    let mut lx = lex(src)?;
    let mut sig = Signature::new();
    let mut raw_rules = Vec::new();
    let mut raw_terms = Vec::new();
    while lx.peek().is_some() {
        let keyword = lx.ident()?;
        match keyword.as_str() {
            "constructor" | "function" => {
                let name = lx.ident()?;
                lx.punct("/")?;
                let arity = lx.number()?;
                lx.punct(";")?;
                let sym = if keyword == "constructor" {
                    Sym::constructor(name.as_str(), arity)
                } else {
                    Sym::function(name.as_str(), arity)
                };
                sig.declare(sym)?;
            }
            "rule" => {
                let lhs = lx.raw_term()?;
                lx.punct("->")?;
                let rhs = lx.raw_term()?;
                lx.punct(";")?;
                raw_rules.push((lhs, rhs));
            }
            "term" => {
                raw_terms.push(lx.raw_term()?);
                lx.punct(";")?;
            }
            other => {
                lx.pos -= 1;
                return Err(lx.error(format!("unknown declaration `{other}`")));
            }
        }
    }
    let mut rules = Vec::new();
    for (i, (lhs, rhs)) in raw_rules.iter().enumerate() {
        let lhs = resolve(&sig, lhs)?;
        let rhs = resolve(&sig, rhs)?;
        let Some(function) = lhs.root().filter(|s| !s.is_constructor()) else {
            return Err(ValidationError::HeadNotFunction { rule: i }.into());
        };
        rules.push(CrsRule::new(function, lhs.children().to_vec(), rhs));
    }
    let system = CrsSystem::new(sig, rules)?;
    let mut terms = Vec::new();
    for (index, raw) in raw_terms.iter().enumerate() {
        let t = resolve(system.signature(), raw)?;
        if let Some(var) = t.variables().first() {
            return Err(TextError::OpenTerm { index, var: *var });
        }
        terms.push(t);
    }
    Ok(Document { system, terms })
}

/// Parses a single closed term over the declared symbols of `system`.
pub fn parse_term_in(system: &CrsSystem, src: &str) -> Result<CrsTerm, TextError> {
    let mut lx = lex(src)?;
    let raw = lx.raw_term()?;
    if lx.peek().is_some() {
        return Err(lx.error("unexpected input after term"));
    }
    let t = resolve(system.signature(), &raw)?;
    if let Some(var) = t.variables().first() {
        return Err(TextError::OpenTerm { index: 0, var: *var });
    }
    Ok(t)
}

/// Prints a system (and optional terms) in the format read by
/// [`parse_system`].
pub fn print_system(system: &CrsSystem, terms: &[CrsTerm]) -> String {
    let mut out = String::new();
    for sym in system.signature().symbols() {
        let keyword = if sym.is_constructor() { "constructor" } else { "function" };
        writeln!(out, "{keyword} {}/{};", sym.name, sym.arity).unwrap();
    }
    for rule in system.rules() {
        writeln!(out, "rule {rule};").unwrap();
    }
    for t in terms {
        writeln!(out, "term {t};").unwrap();
    }
    out
}
