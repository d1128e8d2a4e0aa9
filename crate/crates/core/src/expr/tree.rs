use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AtomKind, Expr, Result, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Exp,
    Log,
    Int,
}

/// An unnormalized expression tree, as produced by the parser or by hand.
#[derive(Debug, Clone, PartialEq)]
pub enum Tree {
    Num(BigRational),
    Sym(Symbol),
    Add(Vec<Tree>),
    Mul(Vec<Tree>),
    Neg(Box<Tree>),
    Div(Box<Tree>, Box<Tree>),
    Pow(Box<Tree>, Box<Tree>),
    Apply(Kernel, Box<Tree>),
}

impl Tree {
    pub fn int(n: i64) -> Tree {
        Tree::Num(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn pow(b: Tree, e: Tree) -> Tree {
        Tree::Pow(Box::new(b), Box::new(e))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(a: Tree, b: Tree) -> Tree {
        Tree::Div(Box::new(a), Box::new(b))
    }

    pub fn apply(k: Kernel, a: Tree) -> Tree {
        Tree::Apply(k, Box::new(a))
    }

    /// A tree that normalizes back to `e`: the sum of its numerator terms over its
    /// denominator, with kernel atoms unfolded.
    pub fn from_expr(e: &Expr) -> Tree {
        let num = poly_tree(e.numer_poly());
        if e.denom_poly().is_one() {
            num
        } else {
            Tree::div(num, poly_tree(e.denom_poly()))
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Tree::Num(_) | Tree::Sym(_) => 1,
            Tree::Add(v) | Tree::Mul(v) => 1 + v.iter().map(Tree::depth).max().unwrap_or(0),
            Tree::Neg(a) | Tree::Apply(_, a) => 1 + a.depth(),
            Tree::Div(a, b) | Tree::Pow(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

fn poly_tree(p: &super::Poly) -> Tree {
    let terms: Vec<Tree> = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut factors = vec![Tree::Num(BigRational::from_integer(c.clone()))];
            for (a, k) in m.factors() {
                let base = match a.kind() {
                    AtomKind::Symbol(s) => Tree::Sym(s.clone()),
                    AtomKind::Exp(u) => Tree::apply(Kernel::Exp, Tree::from_expr(u)),
                    AtomKind::Log(u) => Tree::apply(Kernel::Log, Tree::from_expr(u)),
                    AtomKind::Integral(u) => Tree::apply(Kernel::Int, Tree::from_expr(u)),
                    AtomKind::Pow { base, exponent } => {
                        Tree::pow(Tree::from_expr(base), Tree::from_expr(exponent))
                    }
                };
                factors.push(if *k == 1 {
                    base
                } else {
                    Tree::pow(base, Tree::int(*k as i64))
                });
            }
            Tree::Mul(factors)
        })
        .collect();
    Tree::Add(terms)
}

/// Canonical form of a tree.
pub fn normalize(tree: &Tree) -> Result<Expr> {
    Ok(match tree {
        Tree::Num(q) => Expr::rational(q),
        Tree::Sym(s) => Expr::symbol(s.clone()),
        Tree::Add(v) => {
            let mut acc = Expr::zero();
            for t in v {
                acc = &acc + &normalize(t)?;
            }
            acc
        }
        Tree::Mul(v) => {
            let mut acc = Expr::one();
            for t in v {
                acc = &acc * &normalize(t)?;
            }
            acc
        }
        Tree::Neg(a) => -normalize(a)?,
        Tree::Div(a, b) => normalize(a)?.try_div(&normalize(b)?)?,
        Tree::Pow(b, e) => Expr::pow(&normalize(b)?, &normalize(e)?)?,
        Tree::Apply(k, a) => {
            let u = normalize(a)?;
            match k {
                Kernel::Exp => Expr::exp(&u),
                Kernel::Log => Expr::log(&u)?,
                Kernel::Int => Expr::integral(&u),
            }
        }
    })
}
