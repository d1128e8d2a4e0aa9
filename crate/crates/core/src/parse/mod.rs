//! Text grammar for expressions, second-order ODEs and first-order systems.
//!
//! Precedence from loosest to tightest: `+ -`, `* /`, unary `-`, `^` (right-associative).
//! `y'` and `y''` are derivative coordinates, `f(t)` and `f'(t)` arbitrary functions,
//! `exp`, `log` and `Int` are built-ins, and any other bare identifier is a parameter.
//! Implicit multiplication is rejected.

mod lexer;
mod parser;
mod render;

use std::fmt;

use thiserror::Error;

use crate::expr::{normalize, Expr, ExprError, Symbol, SymbolKind, Tree};
use crate::jlm::{FirstOrderSystem, SecondOrderODE};
use lexer::{lex, Tok};
use parser::Parser;

pub use render::render;

/// A syntax error. `offset` is a byte offset inside the input (0 for empty input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl SyntaxError {
    pub(crate) fn new(src: &str, offset: usize, message: &str, expected: &[&str]) -> Self {
        SyntaxError {
            offset: offset.min(src.len().saturating_sub(1)),
            message: message.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: {} (expected one of: {})",
            self.offset,
            self.message,
            self.expected.join(", ")
        )
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("right-hand side contains the second or a higher derivative")]
    HigherDerivativeOnRHS,
    #[error("equation is not linear in the second derivative")]
    NotLinearInHighest,
    #[error("first-order system right-hand side contains a derivative coordinate")]
    DerivativeInSystem,
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax(_) => "SyntaxError",
            ParseError::HigherDerivativeOnRHS => "HigherDerivativeOnRHS",
            ParseError::NotLinearInHighest => "NotLinearInHighest",
            ParseError::DerivativeInSystem => "DerivativeInSystem",
            ParseError::Expr(e) => e.code(),
        }
    }
}

/// Which identifiers are the independent and the dependent variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub independent: String,
    pub dependents: Vec<String>,
}

impl Default for Context {
    fn default() -> Self {
        Context::with_dependents(&["y"])
    }
}

impl Context {
    pub fn with_dependents(names: &[&str]) -> Self {
        Context {
            independent: "t".into(),
            dependents: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub(crate) fn is_dependent(&self, name: &str) -> bool {
        self.dependents.iter().any(|d| d == name)
    }
}

pub fn parse_tree(text: &str, ctx: &Context) -> Result<Tree, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser::new(text, toks, ctx);
    let tree = p.expr(0)?;
    p.expect_end()?;
    Ok(tree)
}

/// Parses and normalizes with `y` as the dependent variable.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    parse_expr_in(text, &Context::default())
}

pub fn parse_expr_in(text: &str, ctx: &Context) -> Result<Expr, ParseError> {
    Ok(normalize(&parse_tree(text, ctx)?)?)
}

/// Parses `y'' = rhs`, or any equation linear in the second derivative of the variable
/// written with two primes.
pub fn parse_ode(text: &str) -> Result<SecondOrderODE, ParseError> {
    let toks = lex(text)?;
    let dep = toks
        .windows(4)
        .find_map(|w| match (&w[0].tok, &w[1].tok, &w[2].tok, &w[3].tok) {
            (Tok::Ident(n), Tok::Prime, Tok::Prime, next)
                if *next != Tok::Prime && *next != Tok::LParen =>
            {
                Some(n.clone())
            }
            _ => None,
        })
        .ok_or_else(|| {
            SyntaxError::new(text, 0, "no second derivative found", &["y'' = <expr>"])
        })?;
    let ctx = Context::with_dependents(&[&dep]);
    let mut p = Parser::new(text, toks, &ctx);
    let lhs = normalize(&p.expr(0)?)?;
    p.eat(&Tok::Eq, "=")?;
    let rhs = normalize(&p.expr(0)?)?;
    p.expect_end()?;

    let ypp = Symbol::jet(&dep, 2);
    let too_high = |e: &Expr, k: u32| {
        e.symbols()
            .iter()
            .any(|s| s.name() == dep && matches!(s.kind(), SymbolKind::Derivative(j) if j >= k))
    };
    let phi = if lhs.as_symbol() == Some(&ypp) {
        if too_high(&rhs, 2) {
            return Err(ParseError::HigherDerivativeOnRHS);
        }
        rhs
    } else {
        let e = &lhs - &rhs;
        if too_high(&e, 3) {
            return Err(ParseError::HigherDerivativeOnRHS);
        }
        let a = crate::expr::diff_partial(&e, &ypp);
        if a.is_zero() || too_high(&a, 2) {
            return Err(ParseError::NotLinearInHighest);
        }
        let b = crate::expr::substitute(&e, &[(ypp.clone(), Expr::zero())])?;
        (-&b).try_div(&a)?
    };
    SecondOrderODE::new(&dep, phi).map_err(|_| ParseError::HigherDerivativeOnRHS)
}

/// Parses `w1' = <expr>; w2' = <expr>; ...`.
pub fn parse_system(text: &str) -> Result<FirstOrderSystem, ParseError> {
    let mut names = Vec::new();
    let mut pieces = Vec::new();
    let mut base = 0;
    for piece in text.split(';') {
        if piece.trim().is_empty() {
            base += piece.len() + 1;
            continue;
        }
        let toks = lex(piece).map_err(|e| shift(e, base, text))?;
        let ctx = Context::with_dependents(&[]);
        let mut p = Parser::new(piece, toks, &ctx);
        let (name, primes, off) = p.primed_ident().map_err(|e| shift(e, base, text))?;
        if primes != 1 {
            return Err(SyntaxError::new(text, base + off, "expected a first derivative", &["w'"]).into());
        }
        p.eat(&Tok::Eq, "=").map_err(|e| shift(e, base, text))?;
        names.push(name);
        pieces.push((piece, base, p.position_offset()));
        base += piece.len() + 1;
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let ctx = Context::with_dependents(&refs);
    let mut rhs = Vec::new();
    for (piece, base, start) in pieces {
        let tree = parse_tree(&piece[start..], &ctx).map_err(|e| shift(e, base + start, text))?;
        let e = normalize(&tree)?;
        if e.symbols().iter().any(|s| s.is_derivative()) {
            return Err(ParseError::DerivativeInSystem);
        }
        rhs.push(e);
    }
    let vars = names.iter().map(|n| Symbol::dependent(n)).collect();
    Ok(FirstOrderSystem::new(vars, rhs).expect("names and right-hand sides pair up"))
}

fn shift(mut e: SyntaxError, by: usize, text: &str) -> SyntaxError {
    e.offset = (e.offset + by).min(text.len().saturating_sub(1));
    e
}
