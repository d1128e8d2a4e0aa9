use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::{Atom, AtomKind, Expr, Poly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("pole: a denominator or logarithm argument vanished")]
    Pole,
    #[error("non-finite value")]
    NonFinite,
    #[error("no value bound for `{0}`")]
    Unbound(String),
}

/// Number types the evaluator runs over.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn powf(self, e: Self) -> Self;
    fn powu(self, k: u32) -> Self;
    fn magnitude(self) -> f64;
    fn finite(self) -> bool;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn powf(self, e: Self) -> Self {
        f64::powf(self, e)
    }
    fn powu(self, k: u32) -> Self {
        f64::powi(self, k as i32)
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn powf(self, e: Self) -> Self {
        Complex64::powc(self, e)
    }
    fn powu(self, k: u32) -> Self {
        Complex64::powu(&self, k)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(usize),
    Exp(usize),
    Log(usize),
    Pow(usize, usize),
    Ratio { num: PolyCode, den: PolyCode },
}

#[derive(Debug, Clone)]
struct PolyCode {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

/// An expression flattened to a topologically ordered node list for repeated floating-point
/// evaluation. Leaves are symbols and antiderivative markers, in sorted order.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    nodes: Vec<Node>,
    leaves: Vec<Atom>,
}

/// Result of one evaluation: the value and the sum of term magnitudes of the top-level
/// numerator, a scale for relative cancellation tests.
#[derive(Debug, Clone, Copy)]
pub struct Evaluated<S> {
    pub value: S,
    pub numerator: S,
    pub numerator_scale: f64,
}

impl CompiledExpr {
    pub fn new(e: &Expr) -> Self {
        let leaves: Vec<Atom> = e
            .all_atoms()
            .into_iter()
            .filter(|a| matches!(a.kind(), AtomKind::Symbol(_) | AtomKind::Integral(_)))
            .collect();
        let mut c = Compiler {
            nodes: Vec::new(),
            atoms: HashMap::new(),
            leaves: &leaves,
        };
        c.expr(e);
        CompiledExpr {
            nodes: c.nodes,
            leaves,
        }
    }

    pub fn leaves(&self) -> &[Atom] {
        &self.leaves
    }

    /// Evaluates with `values[i]` bound to `leaves()[i]`. Any denominator or log argument
    /// with magnitude at most `pole_tol` is a pole.
    pub fn eval<S: Scalar>(&self, values: &[S], pole_tol: f64) -> Result<Evaluated<S>, EvalError> {
        debug_assert_eq!(values.len(), self.leaves.len());
        let mut vals: Vec<S> = Vec::with_capacity(self.nodes.len());
        let mut last = None;
        for node in &self.nodes {
            let v = match node {
                Node::Leaf(i) => values[*i],
                Node::Exp(a) => vals[*a].exp(),
                Node::Log(a) => {
                    if vals[*a].magnitude() <= pole_tol {
                        return Err(EvalError::Pole);
                    }
                    vals[*a].ln()
                }
                Node::Pow(b, e) => {
                    if vals[*b].magnitude() <= pole_tol {
                        return Err(EvalError::Pole);
                    }
                    vals[*b].powf(vals[*e])
                }
                Node::Ratio { num, den } => {
                    let (n, scale) = poly_value(num, &vals);
                    let (d, _) = poly_value(den, &vals);
                    if !d.finite() || !n.finite() {
                        return Err(EvalError::NonFinite);
                    }
                    if d.magnitude() <= pole_tol {
                        return Err(EvalError::Pole);
                    }
                    last = Some((n, scale));
                    n / d
                }
            };
            if !v.finite() {
                return Err(EvalError::NonFinite);
            }
            vals.push(v);
        }
        let (numerator, numerator_scale) = last.expect("root is a ratio node");
        Ok(Evaluated {
            value: *vals.last().unwrap(),
            numerator,
            numerator_scale,
        })
    }

    /// Evaluates with leaves bound by name lookup (symbol display or marker display).
    pub fn eval_named<S: Scalar>(
        &self,
        lookup: impl Fn(&Atom) -> Option<S>,
        pole_tol: f64,
    ) -> Result<S, EvalError> {
        let values = self
            .leaves
            .iter()
            .map(|a| lookup(a).ok_or_else(|| EvalError::Unbound(a.to_string())))
            .collect::<Result<Vec<S>, _>>()?;
        Ok(self.eval(&values, pole_tol)?.value)
    }
}

fn poly_value<S: Scalar>(p: &PolyCode, vals: &[S]) -> (S, f64) {
    let mut acc = S::from_f64(0.0);
    let mut scale = 0.0;
    for (c, factors) in &p.terms {
        let mut v = S::from_f64(*c);
        for (i, k) in factors {
            v = v * vals[*i].powu(*k);
        }
        scale += v.magnitude();
        acc = acc + v;
    }
    (acc, scale)
}

struct Compiler<'a> {
    nodes: Vec<Node>,
    atoms: HashMap<Atom, usize>,
    leaves: &'a [Atom],
}

impl Compiler<'_> {
    fn push(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn expr(&mut self, e: &Expr) -> usize {
        let num = self.poly(e.numer_poly());
        let den = self.poly(e.denom_poly());
        self.push(Node::Ratio { num, den })
    }

    fn poly(&mut self, p: &Poly) -> PolyCode {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let factors = m.factors().map(|(a, k)| (self.atom(a), *k)).collect();
                (c.to_f64().unwrap_or(f64::NAN), factors)
            })
            .collect();
        PolyCode { terms }
    }

    fn atom(&mut self, a: &Atom) -> usize {
        if let Some(i) = self.atoms.get(a) {
            return *i;
        }
        let node = match a.kind() {
            AtomKind::Symbol(_) | AtomKind::Integral(_) => {
                let i = self.leaves.binary_search(a).expect("leaf collected");
                Node::Leaf(i)
            }
            AtomKind::Exp(u) => Node::Exp(self.expr(u)),
            AtomKind::Log(u) => Node::Log(self.expr(u)),
            AtomKind::Pow { base, exponent } => {
                let b = self.expr(base);
                let e = self.expr(exponent);
                Node::Pow(b, e)
            }
        };
        let i = self.push(node);
        self.atoms.insert(a.clone(), i);
        i
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Symbol;

    #[test]
    fn evaluates_rational_function_with_kernel() {
        let t = Expr::symbol(Symbol::independent("t"));
        let y = Expr::symbol(Symbol::dependent("y"));
        let e = (&(&t * &Expr::exp(&y)) + &Expr::one()).try_div(&y).unwrap();
        let c = CompiledExpr::new(&e);
        assert_eq!(c.leaves().len(), 2);
        let v = c.eval_named(
            |a| match a.to_string().as_str() {
                "t" => Some(2.0),
                "y" => Some(1.0),
                _ => None,
            },
            1e-12,
        );
        assert!((v.unwrap() - (2.0 * 1f64.exp() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn pole_detected() {
        let y = Expr::symbol(Symbol::dependent("y"));
        let c = CompiledExpr::new(&y.recip().unwrap());
        assert_eq!(c.eval(&[0.0f64], 1e-6).unwrap_err(), EvalError::Pole);
    }
}
