//! Parser for the polynomial input grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' INT)?
//! atom   := INT | IDENT | '(' expr ')'
//! ```
//!
//! The canonical text produced by `Display for Polynomial` is a sentence of
//! this grammar, so printing and reparsing is the identity.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Variable names a parse is allowed to produce.
#[derive(Clone, Copy, Debug)]
pub enum Vocabulary<'a> {
    /// Any identifier.
    Any,
    /// Only the listed names.
    Only(&'a [&'a str]),
}

impl Vocabulary<'_> {
    fn admits(&self, name: &str) -> bool {
        match self {
            Vocabulary::Any => true,
            Vocabulary::Only(names) => names.contains(&name),
        }
    }
}

/// The source variables `a, h1, ..., h<delta>`.
pub fn source_vars(delta: usize) -> Vec<String> {
    std::iter::once("a".to_string())
        .chain((1..=delta).map(|i| format!("h{i}")))
        .collect()
}

/// Parses a source polynomial over `a, h1, ..., h<delta>`.
///
/// The result carries all `delta + 1` variables in its ambient set, even if
/// some of them do not occur.
pub fn parse_polynomial(text: &str, delta: usize) -> Result<Polynomial> {
    let vars = source_vars(delta);
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(parse_with(text, Vocabulary::Only(&names))?.with_vars(&names))
}

/// Parses with an explicit vocabulary.
pub fn parse_with(text: &str, vocabulary: Vocabulary<'_>) -> Result<Polynomial> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0, vocabulary, end: text.len() };
    let p = parser.expr()?;
    match parser.peek() {
        None => Ok(p),
        Some(tok) => Err(Error::Syntax {
            pos: tok.pos,
            msg: format!("unexpected {}", tok.kind.describe()),
        }),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Int(n) => format!("integer `{n}`"),
            Kind::Ident(s) => format!("identifier `{s}`"),
            Kind::Plus => "`+`".into(),
            Kind::Minus => "`-`".into(),
            Kind::Star => "`*`".into(),
            Kind::Caret => "`^`".into(),
            Kind::LParen => "`(`".into(),
            Kind::RParen => "`)`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        let kind = match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Kind::Plus,
            b'-' => Kind::Minus,
            b'*' => Kind::Star,
            b'^' => Kind::Caret,
            b'(' => Kind::LParen,
            b')' => Kind::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token { kind: Kind::Int(text[start..i].parse().unwrap()), pos: start });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token { kind: Kind::Ident(text[start..i].to_string()), pos: start });
                continue;
            }
            _ => {
                let bad = text[start..].chars().next().unwrap();
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{bad}`") });
            }
        };
        out.push(Token { kind, pos: start });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vocabulary: Vocabulary<'a>,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        tok
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        // Canonical text of a large polynomial is one long sum; gather the
        // summands and add them in one pass.
        let mut summands = vec![self.term()?];
        loop {
            match self.peek().map(|t| &t.kind) {
                Some(Kind::Plus) => {
                    self.pos += 1;
                    summands.push(self.term()?);
                }
                Some(Kind::Minus) => {
                    self.pos += 1;
                    summands.push(-self.term()?);
                }
                _ => return Ok(Polynomial::sum(&summands)),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while matches!(self.peek().map(|t| &t.kind), Some(Kind::Star)) {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek().map(|t| &t.kind) {
            Some(Kind::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Kind::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if !matches!(self.peek().map(|t| &t.kind), Some(Kind::Caret)) {
            return Ok(base);
        }
        self.pos += 1;
        let pos = self.here();
        match self.next() {
            Some(Token { kind: Kind::Int(n), .. }) => {
                let e = u32::try_from(n).map_err(|_| Error::NonIntegerExponent { pos })?;
                Ok(base.pow(e))
            }
            _ => Err(Error::NonIntegerExponent { pos }),
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let pos = self.here();
        match self.next() {
            Some(Token { kind: Kind::Int(n), .. }) => Ok(Polynomial::constant(n)),
            Some(Token { kind: Kind::Ident(name), pos }) => {
                if self.vocabulary.admits(&name) {
                    Ok(Polynomial::var(&name))
                } else {
                    Err(Error::UnknownVariable { name, pos })
                }
            }
            Some(Token { kind: Kind::LParen, .. }) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token { kind: Kind::RParen, .. }) => Ok(inner),
                    Some(tok) => Err(Error::Syntax {
                        pos: tok.pos,
                        msg: format!("expected `)`, found {}", tok.kind.describe()),
                    }),
                    None => Err(Error::Syntax { pos: self.end, msg: "unclosed `(`".into() }),
                }
            }
            Some(tok) => Err(Error::Syntax {
                pos: tok.pos,
                msg: format!("expected a number, variable or `(`, found {}", tok.kind.describe()),
            }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}
