//! Text syntax for polynomials, forms and vector fields.
//!
//! Terms are products of rationals (`3/2`), variables (`x0`, `x1^2`), an
//! optional wedge word (`dx0^dx2`) and, for vector fields, one coordinate
//! derivation (`d/dx1`). Factors are juxtaposed or joined by `*`; terms are
//! joined by `+` and `-`. Example: `1 dx0^dx1^dx2 + x2 dx0^dx1`.

use std::fmt;

use num::{One, Signed, Zero};

use super::{mask_indices, Form, Monomial, Poly, VectorField, MAX_DIM};
use crate::combinatorics::{fmt_q, parse_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Q),
    Var(usize),
    Dx(usize),
    Partial(usize),
    Caret,
    Star,
    Plus,
    Minus,
}

fn err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        position,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let read_index = |i: &mut usize| -> Result<usize, ParseError> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            return Err(err(start, "expected a coordinate index"));
        }
        let idx: usize = src[start..*i]
            .parse()
            .map_err(|_| err(start, "bad index"))?;
        if idx >= MAX_DIM {
            return Err(err(
                start,
                format!("coordinate index {idx} exceeds {}", MAX_DIM - 1),
            ));
        }
        Ok(idx)
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' => i += 1,
            b'^' => {
                out.push((start, Token::Caret));
                i += 1;
            }
            b'*' => {
                out.push((start, Token::Star));
                i += 1;
            }
            b'+' => {
                out.push((start, Token::Plus));
                i += 1;
            }
            b'-' => {
                out.push((start, Token::Minus));
                i += 1;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let value = parse_q(&src[start..i]).ok_or_else(|| err(start, "bad rational"))?;
                out.push((start, Token::Num(value)));
            }
            b'x' => {
                i += 1;
                let idx = read_index(&mut i)?;
                out.push((start, Token::Var(idx)));
            }
            b'd' => {
                if src[i..].starts_with("d/dx") {
                    i += 4;
                    let idx = read_index(&mut i)?;
                    out.push((start, Token::Partial(idx)));
                } else if src[i..].starts_with("dx") {
                    i += 2;
                    let idx = read_index(&mut i)?;
                    out.push((start, Token::Dx(idx)));
                } else {
                    return Err(err(start, "expected `dx<i>` or `d/dx<i>`"));
                }
            }
            _ => return Err(err(start, format!("unexpected character `{}`", c as char))),
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Poly,
    Form,
    Field,
}

struct Term {
    coef: Q,
    mono: Monomial,
    basis: Vec<usize>,
    partial: Option<usize>,
}

fn parse_terms(src: &str, kind: Kind) -> Result<Vec<Term>, ParseError> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let mut terms = Vec::new();
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        let mut sign = Q::one();
        match &tokens[pos].1 {
            Token::Plus => pos += 1,
            Token::Minus => {
                sign = -sign;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(err(tokens[pos].0, "expected `+` or `-`")),
        }
        first = false;
        let mut term = Term {
            coef: sign,
            mono: Monomial::ONE,
            basis: Vec::new(),
            partial: None,
        };
        let mut factors = 0;
        while pos < tokens.len() {
            let (at, tok) = &tokens[pos];
            match tok {
                Token::Plus | Token::Minus => break,
                Token::Star => {
                    if factors == 0 {
                        return Err(err(*at, "`*` without a left factor"));
                    }
                    pos += 1;
                    continue;
                }
                Token::Num(v) => {
                    term.coef *= v;
                    pos += 1;
                }
                Token::Var(i) => {
                    let mut e = 1u32;
                    pos += 1;
                    if let (Some((_, Token::Caret)), Some((at2, Token::Num(v)))) =
                        (tokens.get(pos), tokens.get(pos + 1))
                    {
                        if !v.is_integer() || v.is_negative() || v > &Q::from_integer(255.into()) {
                            return Err(err(*at2, "exponent must be an integer in 0..=255"));
                        }
                        e = v
                            .to_integer()
                            .try_into()
                            .map_err(|_| err(*at2, "bad exponent"))?;
                        pos += 2;
                    }
                    for _ in 0..e {
                        term.mono = term.mono.mul(Monomial::var(*i));
                    }
                }
                Token::Dx(i) => {
                    if kind != Kind::Form {
                        return Err(err(*at, "`dx` is only allowed in forms"));
                    }
                    if !term.basis.is_empty() {
                        return Err(err(*at, "a term may contain only one wedge word"));
                    }
                    term.basis.push(*i);
                    pos += 1;
                    while let (Some((_, Token::Caret)), Some((_, Token::Dx(j)))) =
                        (tokens.get(pos), tokens.get(pos + 1))
                    {
                        term.basis.push(*j);
                        pos += 2;
                    }
                }
                Token::Partial(i) => {
                    if kind != Kind::Field {
                        return Err(err(*at, "`d/dx` is only allowed in vector fields"));
                    }
                    if term.partial.is_some() {
                        return Err(err(*at, "a term may contain only one `d/dx`"));
                    }
                    term.partial = Some(*i);
                    pos += 1;
                }
                Token::Caret => return Err(err(*at, "unexpected `^`")),
            }
            factors += 1;
        }
        if factors == 0 {
            let at = tokens.get(pos).map_or(src.len(), |t| t.0);
            return Err(err(at, "empty term"));
        }
        if kind == Kind::Field && term.partial.is_none() && !term.coef.is_zero() {
            return Err(err(src.len(), "vector field term without `d/dx<i>`"));
        }
        terms.push(term);
    }
    Ok(terms)
}

pub fn parse_poly(src: &str) -> Result<Poly, ParseError> {
    let mut p = Poly::zero();
    for t in parse_terms(src, Kind::Poly)? {
        p.add_term(t.mono, t.coef);
    }
    Ok(p)
}

pub fn parse_form(src: &str) -> Result<Form, ParseError> {
    let mut f = Form::zero();
    for t in parse_terms(src, Kind::Form)? {
        let coef = Form::from_poly(Poly::monomial(t.coef, t.mono));
        f += &coef.wedge(&Form::basis(&t.basis));
    }
    Ok(f)
}

pub fn parse_vector_field(src: &str) -> Result<VectorField, ParseError> {
    let mut v = VectorField::zero();
    for t in parse_terms(src, Kind::Field)? {
        if let Some(i) = t.partial {
            v.add_component(i, &Poly::monomial(t.coef, t.mono));
        }
    }
    Ok(v)
}

fn mono_text(m: Monomial) -> String {
    let mut parts = Vec::new();
    for i in 0..MAX_DIM {
        match m.exponent(i) {
            0 => {}
            1 => parts.push(format!("x{i}")),
            e => parts.push(format!("x{i}^{e}")),
        }
    }
    parts.join("*")
}

/// Renders `|c| * m` followed by an optional suffix, returning the sign separately.
fn term_text(c: &Q, m: Monomial, suffix: &str) -> (bool, String) {
    let negative = c.is_negative();
    let mag = c.abs();
    let body = if m == Monomial::ONE {
        fmt_q(&mag)
    } else if mag.is_one() {
        mono_text(m)
    } else {
        format!("{}*{}", fmt_q(&mag), mono_text(m))
    };
    let text = if suffix.is_empty() {
        body
    } else {
        format!("{body} {suffix}")
    };
    (negative, text)
}

fn join_terms(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (bool, String)>,
) -> fmt::Result {
    let mut any = false;
    for (negative, text) in terms {
        match (any, negative) {
            (false, false) => write!(f, "{text}")?,
            (false, true) => write!(f, "-{text}")?,
            (true, false) => write!(f, " + {text}")?,
            (true, true) => write!(f, " - {text}")?,
        }
        any = true;
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

fn basis_text(mask: u16) -> String {
    mask_indices(mask)
        .iter()
        .map(|i| format!("dx{i}"))
        .collect::<Vec<_>>()
        .join("^")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join_terms(f, self.terms().map(|(m, c)| term_text(c, *m, "")))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join_terms(
            f,
            self.terms().flat_map(|(mask, p)| {
                let b = basis_text(*mask);
                p.terms()
                    .map(move |(m, c)| term_text(c, *m, &b))
                    .collect::<Vec<_>>()
            }),
        )
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join_terms(
            f,
            self.components().flat_map(|(i, p)| {
                let b = format!("d/dx{i}");
                p.terms()
                    .map(move |(m, c)| term_text(c, *m, &b))
                    .collect::<Vec<_>>()
            }),
        )
    }
}
