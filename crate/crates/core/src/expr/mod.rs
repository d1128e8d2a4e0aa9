//! Exact symbolic expressions.
//!
//! An [`Expr`] is always held in canonical form: a ratio of two integer polynomials in a
//! free set of generators ([`Atom`]s), with
//!
//! - numerator and denominator coprime, integer contents coprime,
//! - a positive leading coefficient in the denominator,
//! - graded-lexicographic term order over the sorted generator names,
//! - at most one `exp` atom per monomial (`exp(u)*exp(v)` is stored as `exp(u+v)`),
//! - at most one symbolic power per base per monomial, and no `exp`/power atom common to
//!   every denominator term (such factors are moved to the numerator with negated argument).
//!
//! Raw, unnormalized trees are built with [`Tree`] and brought to canonical form with
//! [`normalize`].

mod atom;
mod collect;
mod diff;
mod eval;
mod poly;
mod subst;
mod symbol;
mod tree;
mod zero;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use atom::{Atom, AtomKind};
pub use collect::{collect, reassemble, CoefficientMap};
pub use diff::{diff_partial, total_derivative, Derivation, Field, Partial, Total};
pub use eval::{CompiledExpr, EvalError, Evaluated, Scalar};
pub use poly::{Monomial, Poly};
pub use subst::{function_specialization, substitute};
pub use symbol::{Symbol, SymbolKind};
pub use tree::{normalize, Kernel, Tree};
pub use zero::{is_zero, zero_test, ZeroVerdict, ZERO_TEST_POINTS, ZERO_TEST_SEED};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("division by an expression whose normal form is zero")]
    ZeroDenominator,
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("zero test undecided: {0}")]
    Undecided(String),
    #[error("expression is not polynomial in generator `{0}`")]
    NotPolynomialInGenerators(String),
}

impl ExprError {
    pub fn code(&self) -> &'static str {
        match self {
            ExprError::ZeroDenominator => "ZeroDenominator",
            ExprError::LogOfZero => "LogOfZero",
            ExprError::Undecided(_) => "Undecided",
            ExprError::NotPolynomialInGenerators(_) => "NotPolynomialInGenerators",
        }
    }
}

pub type Result<T, E = ExprError> = std::result::Result<T, E>;

#[derive(PartialEq, Eq, Hash, Debug)]
struct Frac {
    num: Poly,
    den: Poly,
}

/// A canonical rational expression. Cheap to clone; immutable.
#[derive(Clone)]
pub struct Expr(Arc<Frac>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::render(self))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({})", crate::parse::render(self))
    }
}

fn zero_arc() -> &'static Expr {
    static ZERO: OnceLock<Expr> = OnceLock::new();
    ZERO.get_or_init(|| {
        Expr(Arc::new(Frac {
            num: Poly::zero(),
            den: Poly::one(),
        }))
    })
}

fn one_arc() -> &'static Expr {
    static ONE: OnceLock<Expr> = OnceLock::new();
    ONE.get_or_init(|| {
        Expr(Arc::new(Frac {
            num: Poly::one(),
            den: Poly::one(),
        }))
    })
}

impl Expr {
    pub fn zero() -> Expr {
        zero_arc().clone()
    }

    pub fn one() -> Expr {
        one_arc().clone()
    }

    pub fn int(n: i64) -> Expr {
        Self::from_poly(Poly::constant(BigInt::from(n)))
    }

    pub fn rational(q: &BigRational) -> Expr {
        Self::canonical(
            Poly::constant(q.numer().clone()),
            Poly::constant(q.denom().clone()),
            false,
        )
        .expect("rational has nonzero denominator")
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Self::rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn symbol(s: Symbol) -> Expr {
        Self::from_atom(Atom::symbol(s))
    }

    pub fn from_atom(a: Atom) -> Expr {
        Expr(Arc::new(Frac {
            num: Poly::atom(a),
            den: Poly::one(),
        }))
    }

    pub fn from_poly(p: Poly) -> Expr {
        Self::canonical(p, Poly::one(), false).expect("unit denominator")
    }

    /// Canonical expression for `num / den`.
    pub fn from_polys(num: Poly, den: Poly) -> Result<Expr> {
        Self::canonical(num, den, false)
    }

    pub fn numer_poly(&self) -> &Poly {
        &self.0.num
    }

    pub fn denom_poly(&self) -> &Poly {
        &self.0.den
    }

    pub fn numer(&self) -> Expr {
        Expr::from_poly(self.0.num.clone())
    }

    pub fn denom(&self) -> Expr {
        Expr::from_poly(self.0.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.num.is_one() && self.0.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.0.num.is_constant() && self.0.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.0.num.as_constant()?;
        let d = self.0.den.as_constant()?;
        Some(BigRational::new(n, d))
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        let q = self.as_rational()?;
        q.is_integer().then(|| q.to_integer())
    }

    /// The atom when the expression is exactly one generator with coefficient 1.
    pub fn as_atom(&self) -> Option<&Atom> {
        if !self.0.den.is_one() || self.0.num.len() != 1 {
            return None;
        }
        let (m, c) = &self.0.num.terms()[0];
        if !c.is_one() || m.len() != 1 {
            return None;
        }
        let (a, e) = m.factors().next()?;
        (*e == 1).then_some(a)
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        self.as_atom().and_then(|a| a.as_symbol())
    }

    /// Generators of the top-level numerator and denominator.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = self.0.num.atoms();
        s.extend(self.0.den.atoms());
        s
    }

    /// Every atom, including those nested inside kernel arguments.
    pub fn all_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<Atom> = self.atoms().into_iter().collect();
        while let Some(a) = stack.pop() {
            if out.insert(a.clone()) {
                for arg in a.args() {
                    stack.extend(arg.atoms());
                }
            }
        }
        out
    }

    /// Every symbol, including those inside kernel arguments.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.all_atoms()
            .iter()
            .filter_map(|a| a.as_symbol().cloned())
            .collect()
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        let target = Atom::symbol(s.clone());
        self.all_atoms().contains(&target)
    }

    pub fn free_of(&self, s: &Symbol) -> bool {
        !self.contains_symbol(s)
    }

    /// True when `pred` holds for some atom at any nesting depth.
    pub fn any_atom(&self, pred: impl FnMut(&Atom) -> bool) -> bool {
        self.all_atoms().iter().any(pred)
    }

    pub fn try_div(&self, other: &Expr) -> Result<Expr> {
        Ok(self * &other.recip()?)
    }

    pub fn recip(&self) -> Result<Expr> {
        if self.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        Self::canonical(self.0.den.clone(), self.0.num.clone(), true)
    }

    pub fn powi(&self, k: i64) -> Result<Expr> {
        if k < 0 {
            return self.recip()?.powi(-k);
        }
        if k == 0 {
            return Ok(Expr::one());
        }
        let k = k as u32;
        Self::canonical(self.0.num.pow(k), self.0.den.pow(k), true)
    }

    pub fn scale(&self, q: &BigRational) -> Expr {
        self * &Expr::rational(q)
    }

    /// Leading numerator coefficient over the denominator's leading coefficient.
    pub fn leading_coefficient(&self) -> BigRational {
        let n = self
            .0
            .num
            .lead()
            .map(|t| t.1.clone())
            .unwrap_or_else(BigInt::zero);
        let d = self.0.den.lead().map(|t| t.1.clone()).unwrap_or_else(BigInt::one);
        BigRational::new(n, d)
    }

    /// The expression scaled so that its leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Expr {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coefficient().recip())
    }

    /// exp(u), with exp(0) = 1.
    pub fn exp(u: &Expr) -> Expr {
        if u.is_zero() {
            return Expr::one();
        }
        Expr::from_atom(Atom::new(AtomKind::Exp(u.clone())))
    }

    /// log(u), with log(1) = 0 and log(a^k) = k log(a) for a single generator a.
    pub fn log(u: &Expr) -> Result<Expr> {
        if u.is_zero() {
            return Err(ExprError::LogOfZero);
        }
        if u.is_one() {
            return Ok(Expr::zero());
        }
        if let Some((a, k)) = single_power(u) {
            if let AtomKind::Pow { base, exponent } = a.kind() {
                let inner = Expr::log(base)?;
                return Ok(&(exponent * &inner) * &Expr::int(k));
            }
            if k != 1 {
                let inner = Expr::log(&Expr::from_atom(a.clone()))?;
                return Ok(&inner * &Expr::int(k));
            }
        }
        Ok(Expr::from_atom(Atom::new(AtomKind::Log(u.clone()))))
    }

    /// base^exponent. Integer exponents give ordinary powers; otherwise the integer part of
    /// the exponent's constant term is split off and the rest becomes a power atom.
    pub fn pow(base: &Expr, exponent: &Expr) -> Result<Expr> {
        if let Some(k) = exponent.as_integer() {
            let k = k.to_i64().expect("exponent fits in i64");
            return base.powi(k);
        }
        if base.is_zero() {
            return Ok(Expr::zero());
        }
        if base.is_one() {
            return Ok(Expr::one());
        }
        if let Some(a) = base.as_atom() {
            if let AtomKind::Pow {
                base: inner,
                exponent: e0,
            } = a.kind()
            {
                return Expr::pow(inner, &(e0 * exponent));
            }
        }
        let c = exponent.constant_term();
        let k = c.floor().to_integer();
        if !k.is_zero() {
            let rest = exponent - &Expr::rational(&BigRational::from_integer(k.clone()));
            let ki = k.to_i64().expect("exponent fits in i64");
            let head = base.powi(ki)?;
            return Ok(&head * &Expr::pow(base, &rest)?);
        }
        Ok(Expr::from_atom(Atom::new(AtomKind::Pow {
            base: base.clone(),
            exponent: exponent.clone(),
        })))
    }

    /// Antiderivative marker for the t-integral of `u`.
    ///
    /// The marker is linear: rational constants and parameter factors are pulled out term by
    /// term, and terms that are polynomial in t with parameter coefficients are integrated
    /// eagerly.
    pub fn integral(u: &Expr) -> Expr {
        let indep = Symbol::independent("t");
        let t_atom = Atom::symbol(indep);
        let mut acc = Expr::zero();
        let den = u.denom_poly().clone();
        let den_const = den.is_constant();
        for (m, c) in u.numer_poly().terms() {
            let (params, rest) = m.partition(|a| {
                a.as_symbol().map(|s| s.is_parameter()).unwrap_or(false)
            });
            let coef = Expr::from_poly(Poly::term(params, c.clone()));
            if den_const {
                let (k, others) = rest.split(&t_atom);
                if others.is_one() {
                    let k1 = BigInt::from(k + 1);
                    let scale = BigRational::new(BigInt::one(), den.as_constant().unwrap() * k1);
                    let tpow = Expr::from_poly(Poly::term(
                        Monomial::from_atom(t_atom.clone(), k + 1),
                        BigInt::one(),
                    ));
                    acc = &acc + &(&coef * &tpow).scale(&scale);
                    continue;
                }
            }
            let g = Expr::from_polys(Poly::term(rest, BigInt::one()), den.clone())
                .expect("nonzero denominator");
            // g is canonical with unit numerator coefficient up to the denominator content.
            let lc = g.leading_coefficient();
            let g = g.scale(&lc.recip());
            let marker = Expr::from_atom(Atom::new(AtomKind::Integral(g)));
            acc = &acc + &(&coef * &marker).scale(&lc);
        }
        acc
    }

    /// Rational constant term of the numerator over a constant denominator (0 otherwise).
    fn constant_term(&self) -> BigRational {
        let Some(d) = self.0.den.as_constant() else {
            return BigRational::zero();
        };
        let c = self
            .0
            .num
            .terms()
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigInt::zero);
        BigRational::new(c, d)
    }

    fn canonical(num: Poly, den: Poly, coprime: bool) -> Result<Expr> {
        if den.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        if needs_fixup(&num) || needs_fixup(&den) {
            let n = fixup(&num)?;
            let d = fixup(&den)?;
            return n.try_div(&d);
        }
        let (mut num, mut den) = (num, den);
        let units = common_units(&den);
        if !units.is_one() {
            den = den.div_monomial_exact(&units);
            let inv = inverse_units(&units)?;
            let n = num.mul(&inv.0.num);
            let d = den.mul(&inv.0.den);
            return Self::canonical(n, d, false);
        }
        if !coprime && !den.is_constant() {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.exact_div(&g).expect("gcd divides numerator");
                den = den.exact_div(&g).expect("gcd divides denominator");
            }
        }
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = num.div_int_exact(&c);
            den = den.div_int_exact(&c);
        }
        if den.lead_coef_sign_negative() {
            num = num.neg();
            den = den.neg();
        }
        if num.is_one() && den.is_one() {
            return Ok(Expr::one());
        }
        Ok(Expr(Arc::new(Frac { num, den })))
    }
}

/// u == a^k for a single generator a (k may be negative, from a monomial denominator).
fn single_power(u: &Expr) -> Option<(Atom, i64)> {
    let num = u.numer_poly();
    let den = u.denom_poly();
    let mono = |p: &Poly| -> Option<Option<(Atom, u32)>> {
        if p.len() != 1 || !p.terms()[0].1.is_one() {
            return None;
        }
        let m = &p.terms()[0].0;
        match m.len() {
            0 => Some(None),
            1 => Some(m.factors().next().cloned()),
            _ => None,
        }
    };
    match (mono(num)?, mono(den)?) {
        (Some((a, k)), None) => Some((a, k as i64)),
        (None, Some((a, k))) => Some((a, -(k as i64))),
        _ => None,
    }
}

fn monomial_needs_fixup(m: &Monomial) -> bool {
    let mut exps = 0u32;
    let mut pow_bases: Vec<&Expr> = Vec::new();
    for (a, e) in m.factors() {
        match a.kind() {
            AtomKind::Exp(_) => {
                exps += e;
                if exps > 1 {
                    return true;
                }
            }
            AtomKind::Pow { base, .. } => {
                if *e > 1 || pow_bases.contains(&base) {
                    return true;
                }
                pow_bases.push(base);
            }
            _ => {}
        }
    }
    false
}

fn needs_fixup(p: &Poly) -> bool {
    p.terms().iter().any(|(m, _)| monomial_needs_fixup(m))
}

/// Merge exp and power atoms inside each monomial.
fn fixup(p: &Poly) -> Result<Expr> {
    let mut plain_terms = Vec::new();
    let mut acc = Expr::zero();
    for (m, c) in p.terms() {
        if !monomial_needs_fixup(m) {
            plain_terms.push((m.clone(), c.clone()));
            continue;
        }
        let mut plain = Vec::new();
        let mut exp_arg = Expr::zero();
        let mut pows: Vec<(Expr, Expr)> = Vec::new();
        for (a, e) in m.factors() {
            match a.kind() {
                AtomKind::Exp(u) => exp_arg = &exp_arg + &(u * &Expr::int(*e as i64)),
                AtomKind::Pow { base, exponent } => {
                    let scaled = exponent * &Expr::int(*e as i64);
                    if let Some(slot) = pows.iter_mut().find(|(b, _)| b == base) {
                        slot.1 = &slot.1 + &scaled;
                    } else {
                        pows.push((base.clone(), scaled));
                    }
                }
                _ => plain.push((a.clone(), *e)),
            }
        }
        let mut term = Expr::from_poly(Poly::term(Monomial::from_sorted(plain), c.clone()));
        term = &term * &Expr::exp(&exp_arg);
        for (b, e) in pows {
            term = &term * &Expr::pow(&b, &e)?;
        }
        // Merged terms are almost always polynomial; summing them in one pass avoids
        // renormalizing a growing sum per term.
        if term.denom_poly().is_one() {
            plain_terms.extend(term.numer_poly().terms().iter().cloned());
        } else {
            acc = &acc + &term;
        }
    }
    Ok(&acc + &Expr::from_poly(Poly::from_terms(plain_terms)))
}

/// Exp/power atoms dividing every term.
fn common_units(den: &Poly) -> Monomial {
    let g = den.monomial_content();
    let (units, _) = g.partition(|a| a.is_unit());
    units
}

fn inverse_units(units: &Monomial) -> Result<Expr> {
    let mut out = Expr::one();
    for (a, e) in units.factors() {
        let k = Expr::int(-(*e as i64));
        let inv = match a.kind() {
            AtomKind::Exp(u) => Expr::exp(&(u * &k)),
            AtomKind::Pow { base, exponent } => Expr::pow(base, &(exponent * &k))?,
            _ => unreachable!("only unit atoms"),
        };
        out = &out * &inv;
    }
    Ok(out)
}

fn add_exprs(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (an, ad) = (&a.0.num, &a.0.den);
    let (bn, bd) = (&b.0.num, &b.0.den);
    if ad == bd {
        return Expr::canonical(an.add(bn), ad.clone(), ad.is_constant())
            .expect("nonzero denominator");
    }
    if ad.is_constant() && bd.is_constant() {
        let (ca, cb) = (ad.as_constant().unwrap(), bd.as_constant().unwrap());
        let g = ca.gcd(&cb);
        let (fa, fb) = (&cb / &g, &ca / &g);
        let num = an.scale(&fa).add(&bn.scale(&fb));
        let den = Poly::constant(&ca * &fa);
        return Expr::canonical(num, den, true).expect("nonzero denominator");
    }
    let g = ad.gcd(bd);
    let ad_g = ad.exact_div(&g).expect("gcd divides");
    let bd_g = bd.exact_div(&g).expect("gcd divides");
    let mut num = an.mul(&bd_g).add(&bn.mul(&ad_g));
    let mut den = ad.mul(&bd_g);
    // Every factor the sum shares with den divides g: the quotients ad/g and bd/g are
    // coprime to each other and to their own numerators.
    if !g.is_constant() && !num.is_zero() {
        let h = num.gcd(&g);
        if !h.is_constant() {
            num = num.exact_div(&h).expect("gcd divides");
            den = den.exact_div(&h).expect("gcd divides");
        }
    }
    Expr::canonical(num, den, true).expect("nonzero denominator")
}

fn mul_exprs(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() {
        return a.clone();
    }
    let (mut an, ad) = (a.0.num.clone(), &a.0.den);
    let (mut bn, bd) = (b.0.num.clone(), &b.0.den);
    let mut ad = ad.clone();
    let mut bd = bd.clone();
    if !bd.is_constant() || !ad.is_constant() {
        let g1 = an.gcd(&bd);
        if !g1.is_constant() {
            an = an.exact_div(&g1).expect("gcd divides");
            bd = bd.exact_div(&g1).expect("gcd divides");
        }
        let g2 = bn.gcd(&ad);
        if !g2.is_constant() {
            bn = bn.exact_div(&g2).expect("gcd divides");
            ad = ad.exact_div(&g2).expect("gcd divides");
        }
    }
    Expr::canonical(an.mul(&bn), ad.mul(&bd), true).expect("nonzero denominator")
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, rhs: &'a Expr) -> Expr {
        add_exprs(self, rhs)
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, rhs: &'a Expr) -> Expr {
        add_exprs(self, &-rhs)
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, rhs: &'a Expr) -> Expr {
        mul_exprs(self, rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        if self.is_zero() {
            return self.clone();
        }
        Expr(Arc::new(Frac {
            num: self.0.num.neg(),
            den: self.0.den.clone(),
        }))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        add_exprs(&self, &rhs)
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        &self - &rhs
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        mul_exprs(&self, &rhs)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<Symbol> for Expr {
    fn from(s: Symbol) -> Expr {
        Expr::symbol(s)
    }
}

/// Sum of expressions.
pub fn sum<'a>(items: impl IntoIterator<Item = &'a Expr>) -> Expr {
    items.into_iter().fold(Expr::zero(), |acc, e| &acc + e)
}

/// Determinant by fraction-free cofactor expansion (small matrices only).
pub fn determinant(m: &[Vec<Expr>]) -> Expr {
    let n = m.len();
    match n {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = Expr::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Expr>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &determinant(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn t() -> Expr {
        Expr::symbol(Symbol::independent("t"))
    }
    fn y() -> Expr {
        Expr::symbol(Symbol::dependent("y"))
    }
    fn yp() -> Expr {
        Expr::symbol(Symbol::jet("y", 1))
    }

    #[test]
    fn like_terms_merge() {
        let e = &(&y() * &yp()) + &(&y() * &yp());
        assert_eq!(e, &Expr::int(2) * &(&y() * &yp()));
    }

    #[test]
    fn exp_product_merges_to_one() {
        let e = &Expr::exp(&t()) * &Expr::exp(&-t());
        assert!(e.is_one());
    }

    #[test]
    fn exp_square_folds_into_argument() {
        let e = &Expr::exp(&t()) * &Expr::exp(&t());
        assert_eq!(e, Expr::exp(&(&t() * &Expr::int(2))));
    }

    #[test]
    fn exp_in_denominator_moves_up() {
        let e = y().try_div(&Expr::exp(&t())).unwrap();
        assert!(e.denom_poly().is_one());
        assert_eq!(e, &y() * &Expr::exp(&-t()));
    }

    #[test]
    fn gcd_cancellation() {
        // (y^2 - t^2)/(y - t) = y + t
        let num = &(&y() * &y()) - &(&t() * &t());
        let den = &y() - &t();
        assert_eq!(num.try_div(&den).unwrap(), &y() + &t());
    }

    #[test]
    fn denominator_sign_and_content() {
        let e = Expr::int(2).try_div(&(&Expr::int(-4) * &y())).unwrap();
        assert_eq!(e.denom_poly().lead().unwrap().1, BigInt::from(2));
        assert!(e.numer_poly().lead().unwrap().1.is_negative());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(y().try_div(&Expr::zero()), Err(ExprError::ZeroDenominator));
        assert_eq!(Expr::log(&Expr::zero()), Err(ExprError::LogOfZero));
    }

    #[test]
    fn symbolic_power_merging() {
        let p = Expr::symbol(Symbol::parameter("p"));
        let yp_ = Expr::pow(&y(), &p).unwrap();
        let yp1 = Expr::pow(&y(), &(&p + &Expr::one())).unwrap();
        assert_eq!(yp1, &y() * &yp_);
        let sq = &yp_ * &yp_;
        assert_eq!(sq, Expr::pow(&y(), &(&p * &Expr::int(2))).unwrap());
        let inv = yp_.recip().unwrap();
        assert!((&inv * &yp_).is_one());
        assert!(Expr::pow(&y(), &Expr::int(2)).unwrap() == &y() * &y());
    }

    #[test]
    fn log_pulls_integer_power() {
        let e = Expr::log(&(&y() * &y())).unwrap();
        assert_eq!(e, &Expr::int(2) * &Expr::log(&y()).unwrap());
        assert!(Expr::log(&Expr::one()).unwrap().is_zero());
    }

    #[test]
    fn integral_is_linear_and_eager_on_polynomials() {
        let two_t = &Expr::int(2) * &t();
        assert_eq!(Expr::integral(&two_t), &t() * &t());
        let f = Expr::symbol(Symbol::function("r", 0));
        let a = Expr::integral(&(&f * &Expr::int(3)));
        assert_eq!(a, &Expr::int(3) * &Expr::integral(&f));
    }

    #[test]
    fn determinant_of_small_matrices() {
        let m = vec![vec![y(), Expr::zero()], vec![Expr::zero(), y().recip().unwrap()]];
        assert!(determinant(&m).is_one());
        let m3 = vec![
            vec![Expr::int(2), Expr::zero(), Expr::zero()],
            vec![Expr::zero(), Expr::int(3), Expr::zero()],
            vec![Expr::zero(), Expr::zero(), t()],
        ];
        assert_eq!(determinant(&m3), &Expr::int(6) * &t());
    }
}
