use thiserror::Error;

use super::term::Term;
use crate::name::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Parses the surface syntax: `\x. M` (or `λx. M`) for abstraction,
/// `\x y. M` as shorthand for `\x. \y. M`, juxtaposition for left-associative
/// application, parentheses, and `#` line comments.
///
/// An abstraction extends as far to the right as possible, so `f \x. x y`
/// is `f (\x. (x y))`.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected input after term"));
    }
    Ok(t)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> ParseError {
        let before = &self.chars[..self.pos.min(self.chars.len())];
        let line = before.iter().filter(|&&c| c == '\n').count() + 1;
        let column = before.iter().rev().take_while(|&&c| c != '\n').count() + 1;
        ParseError {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.get(self.pos) {
            if c == '#' {
                while self.pos < self.chars.len() && self.chars[self.pos] != '\n' {
                    self.pos += 1;
                }
            } else if c.is_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            _ => return Err(self.error("expected identifier")),
        }
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(Name::new(&s))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc: Option<Term> = None;
        loop {
            let mut tail = false;
            let next = match self.peek() {
                Some('\\') | Some('λ') => {
                    tail = true;
                    Some(self.abstraction()?)
                }
                Some('(') => {
                    self.pos += 1;
                    let inner = self.term()?;
                    if self.peek() != Some(')') {
                        return Err(self.error("expected `)`"));
                    }
                    self.pos += 1;
                        Some(inner)
                }
                Some(c) if c.is_ascii_alphabetic() => Some(Term::var(self.ident()?)),
                _ => None,
            };
            let Some(next) = next else { break };
            acc = Some(match acc {
                None => next,
                Some(f) => Term::app(f, next),
            });
            if tail {
                break;
            }
        }
        acc.ok_or_else(|| self.error("expected term"))
    }

    fn abstraction(&mut self) -> Result<Term, ParseError> {
        self.pos += 1;
        let mut binders = vec![self.ident()?];
        while let Some(c) = self.peek() {
            if c == '.' {
                break;
            }
            binders.push(self.ident()?);
        }
        if self.peek() != Some('.') {
            return Err(self.error("expected `.` after binder"));
        }
        self.pos += 1;
        let body = self.term()?;
        Ok(Term::abs_many(&binders, body))
    }
}
