use num_bigint::BigInt;
use num_rational::BigRational;

use super::lexer::{Tok, Token};
use super::{Context, SyntaxError};
use crate::expr::{Kernel, Symbol, Tree};

const ADD_BP: u8 = 10;
const MUL_BP: u8 = 20;
const UNARY_BP: u8 = 30;
const POW_BP: u8 = 40;

pub(crate) struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    ctx: &'a Context,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, toks: Vec<Token>, ctx: &'a Context) -> Self {
        Parser {
            src,
            toks,
            pos: 0,
            ctx,
        }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: &Token, msg: &str, expected: &[&str]) -> SyntaxError {
        let msg = format!("{}, found {}", msg, at.tok.describe());
        SyntaxError::new(self.src, at.offset, &msg, expected)
    }

    pub(crate) fn expect_end(&self) -> Result<(), SyntaxError> {
        let t = self.peek();
        if t.tok == Tok::End {
            Ok(())
        } else {
            Err(self.error(t, "expected an operator", &["+", "-", "*", "/", "^", "end of input"]))
        }
    }

    /// Offset of the current token.
    pub(crate) fn position_offset(&self) -> usize {
        self.peek().offset
    }

    pub(crate) fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    pub(crate) fn eat(&mut self, tok: &Tok, expected: &str) -> Result<Token, SyntaxError> {
        if self.at(tok) {
            Ok(self.bump())
        } else {
            Err(self.error(self.peek(), &format!("expected {}", expected), &[expected]))
        }
    }

    /// `name` followed by its primes, without consuming anything else.
    pub(crate) fn primed_ident(&mut self) -> Result<(String, u32, usize), SyntaxError> {
        let t = self.peek().clone();
        let Tok::Ident(name) = t.tok else {
            return Err(self.error(&t, "expected an identifier", &["identifier"]));
        };
        self.bump();
        let mut primes = 0;
        while self.at(&Tok::Prime) {
            self.bump();
            primes += 1;
        }
        Ok((name, primes, t.offset))
    }

    pub(crate) fn expr(&mut self, min_bp: u8) -> Result<Tree, SyntaxError> {
        let mut lhs = self.prefix()?;
        loop {
            let (l_bp, r_bp) = match self.peek().tok {
                Tok::Plus | Tok::Minus => (ADD_BP, ADD_BP + 1),
                Tok::Star | Tok::Slash => (MUL_BP, MUL_BP + 1),
                Tok::Caret => (POW_BP, POW_BP - 1),
                Tok::End | Tok::RParen | Tok::Comma | Tok::Eq | Tok::Semi => break,
                _ => {
                    return Err(self.error(
                        self.peek(),
                        "expected an operator (implicit multiplication is not allowed)",
                        &["+", "-", "*", "/", "^", ")"],
                    ))
                }
            };
            if l_bp < min_bp {
                break;
            }
            let op = self.bump().tok;
            let rhs = self.expr(r_bp)?;
            lhs = match op {
                Tok::Plus => Tree::Add(vec![lhs, rhs]),
                Tok::Minus => Tree::Add(vec![lhs, Tree::Neg(Box::new(rhs))]),
                Tok::Star => Tree::Mul(vec![lhs, rhs]),
                Tok::Slash => Tree::div(lhs, rhs),
                Tok::Caret => Tree::pow(lhs, rhs),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Tree, SyntaxError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(digits) => {
                self.bump();
                let n: BigInt = digits.parse().expect("lexer yields digits");
                Ok(Tree::Num(BigRational::from_integer(n)))
            }
            Tok::Minus => {
                self.bump();
                let inner = self.expr(UNARY_BP)?;
                Ok(Tree::Neg(Box::new(inner)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr(0)?;
                self.eat(&Tok::RParen, ")")?;
                Ok(inner)
            }
            Tok::Ident(_) => self.identifier(),
            _ => Err(self.error(
                &t,
                "expected an operand",
                &["identifier", "integer", "(", "-"],
            )),
        }
    }

    fn identifier(&mut self) -> Result<Tree, SyntaxError> {
        let start = self.peek().clone();
        let (name, primes, _) = self.primed_ident()?;
        if self.at(&Tok::LParen) {
            let kernel = match name.as_str() {
                "exp" => Some(Kernel::Exp),
                "log" => Some(Kernel::Log),
                "Int" => Some(Kernel::Int),
                _ => None,
            };
            if let (Some(k), 0) = (kernel, primes) {
                self.bump();
                let arg = self.expr(0)?;
                self.eat(&Tok::RParen, ")")?;
                return Ok(Tree::apply(k, arg));
            }
            if kernel.is_some() || self.ctx.is_dependent(&name) || name == self.ctx.independent {
                return Err(self.error(&start, "cannot apply this name as a function", &["operator"]));
            }
            self.bump();
            let arg = self.peek().clone();
            match &arg.tok {
                Tok::Ident(v) if *v == self.ctx.independent => {
                    self.bump();
                }
                _ => {
                    let want = self.ctx.independent.as_str();
                    return Err(self.error(&arg, "arbitrary functions take the independent variable", &[want]));
                }
            }
            self.eat(&Tok::RParen, ")")?;
            return Ok(Tree::Sym(Symbol::function(&name, primes)));
        }
        if matches!(name.as_str(), "exp" | "log" | "Int") {
            return Err(self.error(self.peek(), "expected `(` after built-in", &["("]));
        }
        if name == self.ctx.independent {
            if primes > 0 {
                return Err(self.error(&start, "the independent variable has no derivatives", &["identifier"]));
            }
            return Ok(Tree::Sym(Symbol::independent(&name)));
        }
        if primes > 0 || self.ctx.is_dependent(&name) {
            return Ok(Tree::Sym(Symbol::jet(&name, primes)));
        }
        Ok(Tree::Sym(Symbol::parameter(&name)))
    }
}
