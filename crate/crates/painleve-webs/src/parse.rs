//! Expression parser for polynomials over a declared variable context.
//!
//! Grammar (explicit `*` required, no juxtaposition):
//!
//! ```text
//! expr     := ('+'|'-')? term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' nat)?
//! base     := rational | identifier | '(' expr ')'
//! rational := nat ('/' nat)?
//! ```
//!
//! The optional leading sign is an extension over the plain sum grammar so
//! that canonical renderings (which may start with a negative term) parse
//! back to the same polynomial.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::context::VariableContext;
use crate::error::{EngineError, Result};
use crate::poly::{Polynomial, Rat};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
            }
            b'+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, start));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, start));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, start));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, start));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::from_str(&text[start..i]).unwrap();
                toks.push((Tok::Num(n), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(EngineError::Parse {
                    pos: start,
                    msg: format!("unexpected character `{}`", &text[start..start + 1]),
                })
            }
        }
    }
    Ok(Lexer { toks, end: bytes.len() })
}

struct Parser<'a> {
    lx: Lexer,
    ctx: &'a Arc<VariableContext>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.lx.toks.get(self.pos).map(|&(_, p)| p).unwrap_or(self.lx.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.lx.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(EngineError::Parse { pos: self.here(), msg: msg.into() })
    }

    fn nat(&mut self) -> Result<BigInt> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(n),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected a natural number")
            }
        }
    }

    fn base(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Tok::Num(_)) => {
                let n = self.nat()?;
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    let d = self.nat()?;
                    if d == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                    Ok(Polynomial::constant(self.ctx, Rat::new(n, d)))
                } else {
                    Ok(Polynomial::constant(self.ctx, Rat::from_integer(n)))
                }
            }
            Some(Tok::Ident(_)) => {
                let at = self.here();
                let name = match self.bump() {
                    Some(Tok::Ident(s)) => s,
                    _ => unreachable!(),
                };
                match self.ctx.var(&name) {
                    Some(v) => Ok(Polynomial::var(self.ctx, v)),
                    None => Err(EngineError::Parse {
                        pos: at,
                        msg: format!("unknown identifier `{name}`"),
                    }),
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => {
                        self.pos = self.pos.saturating_sub(1);
                        self.err("expected `)`")
                    }
                }
            }
            _ => self.err("expected a number, identifier, or `(`"),
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let b = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let e = self.nat()?;
            let e: u32 = match e.try_into() {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
            Ok(b.pow(e))
        } else {
            Ok(b)
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut p = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            p = p.mul(&self.factor()?);
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let mut p = self.term()?;
        if negate {
            p = p.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    p = p.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    p = p.sub(&self.term()?);
                }
                _ => return Ok(p),
            }
        }
    }
}

pub fn parse_expression(text: &str, ctx: &Arc<VariableContext>) -> Result<Polynomial> {
    let lx = lex(text)?;
    let mut p = Parser { lx, ctx, pos: 0 };
    let poly = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(poly)
}

/// Parses a standalone rational literal with optional sign: `-3`, `1/2`.
pub fn parse_rational(text: &str) -> Result<Rat> {
    let lx = lex(text)?;
    let mut i = 0;
    let mut sign = BigInt::one();
    if matches!(lx.toks.get(i).map(|(t, _)| t), Some(Tok::Minus)) {
        sign = -sign;
        i += 1;
    } else if matches!(lx.toks.get(i).map(|(t, _)| t), Some(Tok::Plus)) {
        i += 1;
    }
    let n = match lx.toks.get(i) {
        Some((Tok::Num(n), _)) => n.clone(),
        _ => return Err(EngineError::Parse { pos: 0, msg: "expected a rational number".into() }),
    };
    i += 1;
    let mut d = BigInt::one();
    if matches!(lx.toks.get(i).map(|(t, _)| t), Some(Tok::Slash)) {
        i += 1;
        d = match lx.toks.get(i) {
            Some((Tok::Num(n), _)) if *n != BigInt::from(0) => n.clone(),
            _ => return Err(EngineError::Parse { pos: 0, msg: "expected a nonzero denominator".into() }),
        };
        i += 1;
    }
    if i != lx.toks.len() {
        return Err(EngineError::Parse { pos: lx.toks[i].1, msg: "trailing input".into() });
    }
    Ok(Rat::new(sign * n, d))
}

/// All identifiers appearing in `text`, in order of first occurrence.
/// Used to infer the parameter list of user-supplied surface polynomials.
pub fn scan_identifiers(text: &str) -> Result<Vec<String>> {
    let lx = lex(text)?;
    let mut seen = Vec::new();
    for (t, _) in lx.toks {
        if let Tok::Ident(name) = t {
            if !seen.contains(&name) {
                seen.push(name);
            }
        }
    }
    Ok(seen)
}
