//! Concrete syntax: `0`, `a.t`, `tau.t`, `t + u`, `x`, parentheses.
//!
//! An identifier directly followed by `.` is an action label, any other
//! identifier is a variable. Using one name in both roles is an error.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::term::{is_action_name, Alphabet, Action, Label, Term, Var, TAU};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Zero,
    Ident(String),
    Dot,
    Plus,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '.' => {
                out.push((i, Tok::Dot));
                i += 1;
            }
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0' => {
                out.push((i, Tok::Zero));
                i += 1;
            }
            '#' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == start + 1 {
                    return Err(Error::Lex { offset: start, message: "`#` must be followed by digits".into() });
                }
                out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_' || bytes[i] == '\'') {
                    i += 1;
                }
                out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
            }
            other => {
                return Err(Error::Lex { offset: i, message: format!("unexpected character `{other}`") });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    alphabet: &'a Alphabet,
    actions: BTreeSet<String>,
    vars: BTreeSet<String>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.offset(), message: message.into() })
    }

    fn sum(&mut self) -> Result<Term> {
        let mut acc = self.prefixed()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            let rhs = self.prefixed()?;
            acc = Term::sum(acc, rhs);
        }
        Ok(acc)
    }

    fn prefixed(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(Term::Nil)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.sum()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.syntax("expected `)`");
                }
                self.pos += 1;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                let at = self.offset();
                self.pos += 1;
                if self.peek() == Some(&Tok::Dot) {
                    self.pos += 1;
                    let label = self.label(&name, at)?;
                    let body = self.prefixed()?;
                    Ok(Term::prefix(label, body))
                } else {
                    self.variable(&name, at)
                }
            }
            Some(tok) => self.syntax(format!("unexpected token {tok:?}")),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn label(&mut self, name: &str, at: usize) -> Result<Label> {
        if name == TAU {
            return Ok(Label::Tau);
        }
        if !is_action_name(name) {
            return Err(Error::Lex { offset: at, message: format!("`{name}` is not an action name") });
        }
        let a = Action::new(name);
        if !self.alphabet.contains(&a) {
            return Err(Error::UnknownAction(name.to_string()));
        }
        if self.vars.contains(name) {
            return Err(Error::NameClash(name.to_string()));
        }
        self.actions.insert(name.to_string());
        Ok(Label::Act(a))
    }

    fn variable(&mut self, name: &str, at: usize) -> Result<Term> {
        if name == TAU {
            return Err(Error::Syntax { offset: at, message: "`tau` must prefix a term".into() });
        }
        if name.starts_with('#') {
            return Err(Error::Syntax { offset: at, message: format!("`{name}` must prefix a term") });
        }
        let declared = self.alphabet.actions().iter().any(|a| a.as_str() == name);
        if declared || self.actions.contains(name) {
            return Err(Error::NameClash(name.to_string()));
        }
        self.vars.insert(name.to_string());
        Ok(Term::Var(Var::new(name)))
    }
}

/// Parses one term against `alphabet`.
pub fn parse_term(text: &str, alphabet: &Alphabet) -> Result<Term> {
    let mut terms = parse_terms(&[text], alphabet)?;
    Ok(terms.remove(0))
}

/// Parses several terms sharing one name table, so that a name used as an
/// action in one and as a variable in another is rejected.
pub fn parse_terms(texts: &[&str], alphabet: &Alphabet) -> Result<Vec<Term>> {
    let mut actions = BTreeSet::new();
    let mut vars = BTreeSet::new();
    let mut out = Vec::new();
    for text in texts {
        let mut p = Parser {
            toks: lex(text)?,
            pos: 0,
            end: text.len(),
            alphabet,
            actions: std::mem::take(&mut actions),
            vars: std::mem::take(&mut vars),
        };
        let t = p.sum()?;
        if p.pos != p.toks.len() {
            return p.syntax("trailing input");
        }
        // a name first seen as a variable and later as an action
        if let Some(clash) = p.actions.intersection(&p.vars).next() {
            return Err(Error::NameClash(clash.clone()));
        }
        actions = p.actions;
        vars = p.vars;
        out.push(t);
    }
    Ok(out)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Nil => f.write_str("0"),
            Term::Var(x) => write!(f, "{x}"),
            Term::Prefix(l, body) => {
                write!(f, "{l}.")?;
                if matches!(**body, Term::Sum(..)) {
                    write!(f, "({body})")
                } else {
                    write!(f, "{body}")
                }
            }
            Term::Sum(l, r) => {
                if matches!(**r, Term::Sum(..)) {
                    write!(f, "{l} + ({r})")
                } else {
                    write!(f, "{l} + {r}")
                }
            }
        }
    }
}
