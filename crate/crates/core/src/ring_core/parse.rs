//! Expression grammar for polynomials:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' digits)?
//! atom  := digits | ident | '(' expr ')' | '[' expr ']'
//! ```
//!
//! `[e]` marks a Teichmüller coefficient; over a field it evaluates like
//! parentheses. `p` is reserved and never an identifier.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use super::{PolyRing, Polynomial, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {column}: {message}")]
pub struct ExprError {
    /// 1-based character column within the expression.
    pub column: usize,
    pub message: String,
}

impl ExprError {
    fn at(column: usize, message: impl Into<String>) -> Self {
        ExprError { column, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
    Teichmuller(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*^()[]".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(ExprError::at(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let column = self.col();
            if self.eat('+') {
                let rhs = self.term()?;
                lhs = Expr { kind: ExprKind::Add(Box::new(lhs), Box::new(rhs)), column };
            } else if self.eat('-') {
                let rhs = self.term()?;
                lhs = Expr { kind: ExprKind::Sub(Box::new(lhs), Box::new(rhs)), column };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let column = self.col();
            if self.eat('*') {
                let rhs = self.unary()?;
                lhs = Expr { kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)), column };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        let column = self.col();
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), column });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        let column = self.col();
        if self.eat('^') {
            let ecol = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let k = u64::try_from(&n).map_err(|_| ExprError::at(ecol, "exponent too large"))?;
                    Ok(Expr { kind: ExprKind::Pow(Box::new(base), k), column })
                }
                Some(Tok::Sym('-')) => Err(ExprError::at(ecol, "negative exponents are not allowed")),
                _ => Err(ExprError::at(ecol, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let column = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr { kind: ExprKind::Int(n), column })
            }
            Some(Tok::Ident(name)) => {
                if name == "p" {
                    return Err(ExprError::at(column, "`p` is reserved and cannot be used as an identifier"));
                }
                self.pos += 1;
                Ok(Expr { kind: ExprKind::Ident(name), column })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ExprError::at(self.col(), "expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(']') {
                    return Err(ExprError::at(self.col(), "expected `]`"));
                }
                Ok(Expr { kind: ExprKind::Teichmuller(Box::new(e)), column })
            }
            Some(Tok::Sym(c)) => Err(ExprError::at(column, format!("unexpected `{c}`"))),
            None => Err(ExprError::at(column, "unexpected end of expression")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::at(p.col(), "trailing input"));
    }
    Ok(e)
}

impl Expr {
    /// Evaluates in `ring`; identifiers resolve through
    /// [`Ring::named_element`], brackets through `teich`.
    pub fn eval_with<R, T>(&self, ring: &R, teich: &T) -> Result<R::Elem, ExprError>
    where
        R: Ring,
        T: Fn(&Expr) -> Result<R::Elem, ExprError>,
    {
        use ExprKind::*;
        Ok(match &self.kind {
            Int(n) => ring.from_bigint(n),
            Ident(name) => ring
                .named_element(name)
                .ok_or_else(|| ExprError::at(self.column, format!("unknown variable `{name}`")))?,
            Neg(a) => ring.neg(&a.eval_with(ring, teich)?),
            Add(a, b) => ring.add(&a.eval_with(ring, teich)?, &b.eval_with(ring, teich)?),
            Sub(a, b) => ring.sub(&a.eval_with(ring, teich)?, &b.eval_with(ring, teich)?),
            Mul(a, b) => ring.mul(&a.eval_with(ring, teich)?, &b.eval_with(ring, teich)?),
            Pow(a, k) => ring.pow(&a.eval_with(ring, teich)?, *k),
            Teichmuller(a) => teich(a)?,
        })
    }

    /// Evaluation with brackets read as parentheses.
    pub fn eval<R: Ring>(&self, ring: &R) -> Result<R::Elem, ExprError> {
        self.eval_with(ring, &|inner: &Expr| inner.eval(ring))
    }

    /// Identifiers used anywhere in the expression.
    pub fn identifiers(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents(&self, out: &mut Vec<(String, usize)>) {
        use ExprKind::*;
        match &self.kind {
            Int(_) => {}
            Ident(n) => out.push((n.clone(), self.column)),
            Neg(a) | Pow(a, _) | Teichmuller(a) => a.collect_idents(out),
            Add(a, b) | Sub(a, b) | Mul(a, b) => {
                a.collect_idents(out);
                b.collect_idents(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ExprKind::*;
        match &self.kind {
            Int(n) => write!(f, "{n}"),
            Ident(s) => write!(f, "{s}"),
            Neg(a) => write!(f, "-({a})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "{a}*{b}"),
            Pow(a, k) => write!(f, "({a})^{k}"),
            Teichmuller(a) => write!(f, "[{a}]"),
        }
    }
}

impl<R: Ring> Polynomial<R> {
    /// Parses an expression in the grammar above.
    pub fn parse(ring: &PolyRing<R>, src: &str) -> Result<Self, ExprError> {
        parse_expr(src)?.eval(ring)
    }
}
