//! A tiny expression language for chart maps.
//!
//! ```text
//! list    := expr (';' expr)*
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('+' | '-') unary | atom
//! atom    := number | 'pi' | variable | func '(' expr (',' expr)* ')' | '(' expr ')'
//! number  := digits ('.' digits?)? (('e' | 'E') ('+' | '-')? digits)?
//! variable:= 'x' | 'y' | 'z' | 'w' | 'x1' | 'x2' | 'x3' | 'x4'
//! func    := 'sin' | 'cos' | 'exp' | 'atan2'
//! ```
//!
//! `x`, `y`, `z`, `w` are aliases for `x1`..`x4`. Whitespace is insignificant.
//! Number literals are exact decimals, so `0.5` is the rational `1/2`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Atan2,
}

impl Func {
    fn arity(self) -> usize {
        match self {
            Func::Atan2 => 2,
            _ => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Atan2 => "atan2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Rational),
    Pi,
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn eval(&self, vars: &[f64]) -> f64 {
        match self {
            Expr::Const(q) => q.to_f64().unwrap_or(f64::NAN),
            Expr::Pi => std::f64::consts::PI,
            Expr::Var(i) => vars[*i],
            Expr::Neg(a) => -a.eval(vars),
            Expr::Add(a, b) => a.eval(vars) + b.eval(vars),
            Expr::Sub(a, b) => a.eval(vars) - b.eval(vars),
            Expr::Mul(a, b) => a.eval(vars) * b.eval(vars),
            Expr::Div(a, b) => a.eval(vars) / b.eval(vars),
            Expr::Call(f, args) => match f {
                Func::Sin => args[0].eval(vars).sin(),
                Func::Cos => args[0].eval(vars).cos(),
                Func::Exp => args[0].eval(vars).exp(),
                Func::Atan2 => args[0].eval(vars).atan2(args[1].eval(vars)),
            },
        }
    }

    /// Highest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) | Expr::Pi => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
            Expr::Call(_, args) => args.iter().filter_map(Expr::max_var).max(),
        }
    }

    /// Exact affine form `Σ coeff_i x_i + constant`, when the expression is
    /// one. Any use of `pi` or a function makes it non-affine.
    pub fn affine(&self) -> Option<AffineForm> {
        match self {
            Expr::Const(q) => Some(AffineForm::constant(q.clone())),
            Expr::Pi | Expr::Call(..) => None,
            Expr::Var(i) => {
                let mut coeffs = BTreeMap::new();
                coeffs.insert(*i, Rational::one());
                Some(AffineForm { coeffs, constant: Rational::zero() })
            }
            Expr::Neg(a) => Some(a.affine()?.scale(&-Rational::one())),
            Expr::Add(a, b) => Some(a.affine()?.add(&b.affine()?)),
            Expr::Sub(a, b) => Some(a.affine()?.add(&b.affine()?.scale(&-Rational::one()))),
            Expr::Mul(a, b) => {
                let (a, b) = (a.affine()?, b.affine()?);
                if a.is_constant() {
                    Some(b.scale(&a.constant))
                } else if b.is_constant() {
                    Some(a.scale(&b.constant))
                } else {
                    None
                }
            }
            Expr::Div(a, b) => {
                let (a, b) = (a.affine()?, b.affine()?);
                if b.is_constant() && !b.constant.is_zero() {
                    Some(a.scale(&b.constant.recip()))
                } else {
                    None
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: BTreeMap<usize, Rational>,
    pub constant: Rational,
}

impl AffineForm {
    fn constant(q: Rational) -> Self {
        Self { coeffs: BTreeMap::new(), constant: q }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.values().all(Zero::is_zero)
    }

    fn scale(mut self, s: &Rational) -> Self {
        self.coeffs.values_mut().for_each(|c| *c = &*c * s);
        self.constant = &self.constant * s;
        self
    }

    fn add(mut self, other: &Self) -> Self {
        for (i, c) in &other.coeffs {
            let e = self.coeffs.entry(*i).or_insert_with(Rational::zero);
            *e = &*e + c;
        }
        self.constant = &self.constant + &other.constant;
        self
    }

    pub fn coefficient(&self, var: usize) -> Rational {
        self.coeffs.get(&var).cloned().unwrap_or_else(Rational::zero)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Semi,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b',' => out.push((Tok::Comma, start)),
            b';' => out.push((Tok::Semi, start)),
            b'0'..=b'9' | b'.' => {
                let (q, len) = lex_number(&text[start..]).ok_or_else(|| ParseError {
                    position: start,
                    message: "malformed number".into(),
                })?;
                out.push((Tok::Num(q), start));
                i += len;
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                out.push((Tok::Ident(text[i..j].to_string()), start));
                i = j;
                continue;
            }
            _ => {
                return Err(ParseError {
                    position: start,
                    message: format!("unexpected character {:?}", text[start..].chars().next().unwrap_or('?')),
                })
            }
        }
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn lex_number(s: &str) -> Option<(Rational, usize)> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut digits = String::new();
    let mut frac_len = 0u32;
    while i < b.len() && b[i].is_ascii_digit() {
        digits.push(b[i] as char);
        i += 1;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            digits.push(b[i] as char);
            frac_len += 1;
            i += 1;
        }
    }
    if digits.is_empty() {
        return None;
    }
    let mut exp: i64 = 0;
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        let mut neg = false;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            neg = b[j] == b'-';
            j += 1;
        }
        let start = j;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        if j == start {
            return None;
        }
        exp = s[start..j].parse().ok()?;
        if neg {
            exp = -exp;
        }
        i = j;
    }
    let mantissa: BigInt = digits.parse().ok()?;
    let scale = exp - i64::from(frac_len);
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        Rational::from_integer(mantissa * Pow::pow(&ten, u32::try_from(scale).ok()?))
    } else {
        Rational::new(mantissa, Pow::pow(&ten, u32::try_from(-scale).ok()?))
    };
    Some((q, i))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.here(), message: message.into() })
    }

    fn list(&mut self) -> Result<Vec<Expr>, ParseError> {
        let mut out = vec![self.expr()?];
        loop {
            match self.peek() {
                Tok::Semi => {
                    self.bump();
                    out.push(self.expr()?);
                }
                Tok::End => return Ok(out),
                other => return self.err(format!("unexpected token {}", describe(other))),
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.here();
        match self.bump() {
            Tok::Num(q) => Ok(Expr::Const(q)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if name == "pi" {
                    return Ok(Expr::Pi);
                }
                if let Some(v) = variable_index(&name) {
                    return Ok(Expr::Var(v));
                }
                let func = match name.as_str() {
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "exp" => Func::Exp,
                    "atan2" => Func::Atan2,
                    _ => return Err(ParseError { position: at, message: format!("unknown identifier `{name}`") }),
                };
                if *self.peek() != Tok::LParen {
                    return self.err(format!("expected '(' after `{name}`"));
                }
                self.bump();
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect_rparen()?;
                if args.len() != func.arity() {
                    return Err(ParseError {
                        position: at,
                        message: format!("`{}` takes {} argument(s), got {}", func.name(), func.arity(), args.len()),
                    });
                }
                Ok(Expr::Call(func, args))
            }
            other => Err(ParseError { position: at, message: format!("unexpected token {}", describe(&other)) }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            other => self.err(format!("expected ')', found {}", describe(other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(q) => format!("number {q}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Semi => "';'".into(),
        Tok::End => "end of input".into(),
    }
}

fn variable_index(name: &str) -> Option<usize> {
    match name {
        "x" | "x1" => Some(0),
        "y" | "x2" => Some(1),
        "z" | "x3" => Some(2),
        "w" | "x4" => Some(3),
        _ => None,
    }
}

/// Parses a `;`-separated list of coordinate expressions.
pub fn parse_expressions(text: &str) -> Result<Vec<Expr>, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    p.list()
}
