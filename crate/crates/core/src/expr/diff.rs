use std::collections::HashMap;

use super::{Atom, AtomKind, Expr, Poly, Symbol, SymbolKind};

/// A derivation of the expression field, fixed by its action on symbols and antiderivative
/// markers and extended by linearity, the Leibniz rule and the chain rule through kernels.
pub trait Derivation {
    fn on_symbol(&self, s: &Symbol) -> Expr;
    /// Image of the marker `Int(u)`.
    fn on_integral(&self, u: &Expr) -> Expr;

    fn apply(&self, e: &Expr) -> Expr
    where
        Self: Sized,
    {
        Deriver {
            d: self,
            memo: HashMap::new(),
        }
        .expr(e)
    }
}

struct Deriver<'a, D: Derivation> {
    d: &'a D,
    memo: HashMap<Atom, Expr>,
}

impl<D: Derivation> Deriver<'_, D> {
    fn expr(&mut self, e: &Expr) -> Expr {
        let dn = self.poly(e.numer_poly());
        if e.denom_poly().is_constant() {
            let d = e.denom_poly().as_constant().unwrap();
            return dn.try_div(&Expr::from_poly(Poly::constant(d))).unwrap();
        }
        let dd = self.poly(e.denom_poly());
        let den = e.denom();
        let top = &(&dn * &den) - &(&e.numer() * &dd);
        top.try_div(&(&den * &den)).expect("canonical denominator is nonzero")
    }

    fn poly(&mut self, p: &Poly) -> Expr {
        let mut acc = Expr::zero();
        for a in p.atoms() {
            let da = self.atom(&a);
            if da.is_zero() {
                continue;
            }
            let partial = Expr::from_poly(p.formal_derivative(&a));
            acc = &acc + &(&partial * &da);
        }
        acc
    }

    fn atom(&mut self, a: &Atom) -> Expr {
        if let Some(v) = self.memo.get(a) {
            return v.clone();
        }
        let v = match a.kind() {
            AtomKind::Symbol(s) => self.d.on_symbol(s),
            AtomKind::Integral(u) => self.d.on_integral(u),
            AtomKind::Exp(u) => {
                let du = self.expr(u);
                &Expr::from_atom(a.clone()) * &du
            }
            AtomKind::Log(u) => self.expr(u).try_div(u).expect("log argument is nonzero"),
            AtomKind::Pow { base, exponent } => {
                let db = self.expr(base);
                let de = self.expr(exponent);
                let mut inner = (exponent * &db).try_div(base).expect("power base is nonzero");
                if !de.is_zero() {
                    let lb = Expr::log(base).expect("power base is nonzero");
                    inner = &inner + &(&de * &lb);
                }
                &Expr::from_atom(a.clone()) * &inner
            }
        };
        self.memo.insert(a.clone(), v.clone());
        v
    }
}

/// ∂/∂s. Antiderivative markers depend on t only through their defining rule
/// ∂_t Int(u) = u; for other symbols the derivative passes under the integral.
pub struct Partial(pub Symbol);

impl Derivation for Partial {
    fn on_symbol(&self, s: &Symbol) -> Expr {
        if *s == self.0 {
            return Expr::one();
        }
        if self.0.kind() == SymbolKind::Independent {
            if let SymbolKind::Function(_) = s.kind() {
                return Expr::symbol(s.raised().unwrap());
            }
        }
        Expr::zero()
    }

    fn on_integral(&self, u: &Expr) -> Expr {
        if self.0.kind() == SymbolKind::Independent {
            u.clone()
        } else {
            Expr::integral(&self.apply(u))
        }
    }
}

/// The total derivative D_t on the infinite jet space.
pub struct Total;

impl Derivation for Total {
    fn on_symbol(&self, s: &Symbol) -> Expr {
        match s.kind() {
            SymbolKind::Independent => Expr::one(),
            SymbolKind::Parameter => Expr::zero(),
            _ => Expr::symbol(s.raised().unwrap()),
        }
    }

    fn on_integral(&self, u: &Expr) -> Expr {
        u.clone()
    }
}

/// The vector field `dt·∂_t + Σ c_s ∂_s`, where ∂_t also acts on arbitrary functions and
/// antiderivative markers of t.
pub struct Field {
    pub dt: Expr,
    pub components: Vec<(Symbol, Expr)>,
}

impl Derivation for Field {
    fn on_symbol(&self, s: &Symbol) -> Expr {
        match s.kind() {
            SymbolKind::Independent => self.dt.clone(),
            SymbolKind::Function(_) => &self.dt * &Expr::symbol(s.raised().unwrap()),
            _ => self
                .components
                .iter()
                .find(|(k, _)| k == s)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Expr::zero),
        }
    }

    fn on_integral(&self, u: &Expr) -> Expr {
        &self.dt * u
    }
}

pub fn diff_partial(e: &Expr, s: &Symbol) -> Expr {
    Partial(s.clone()).apply(e)
}

pub fn total_derivative(e: &Expr) -> Expr {
    Total.apply(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &Symbol) -> Expr {
        Expr::symbol(s.clone())
    }

    #[test]
    fn partial_of_power_kernel() {
        let y = Symbol::dependent("y");
        let p = sym(&Symbol::parameter("p"));
        let yp = Expr::pow(&sym(&y), &p).unwrap();
        let d = diff_partial(&yp, &y);
        let expected = (&p * &yp).try_div(&sym(&y)).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn partial_through_exp_and_quotient() {
        let y = Symbol::dependent("y");
        let e = Expr::exp(&sym(&y).recip().unwrap());
        let d = diff_partial(&e, &y);
        let expected = (-&e).try_div(&(&sym(&y) * &sym(&y))).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn total_derivative_of_log_square() {
        let y = Symbol::dependent("y");
        let l = Expr::log(&(&sym(&y) * &sym(&y))).unwrap();
        let d = total_derivative(&l);
        let expected = (&Expr::int(2) * &sym(&Symbol::jet("y", 1)))
            .try_div(&sym(&y))
            .unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn total_derivative_of_marker_and_function() {
        let r = sym(&Symbol::function("r", 0));
        let big_r = Expr::integral(&r);
        assert_eq!(total_derivative(&big_r), r);
        assert_eq!(total_derivative(&r), sym(&Symbol::function("r", 1)));
    }

    #[test]
    fn functions_are_constant_in_jet_directions() {
        let f = sym(&Symbol::function("f", 0));
        assert!(diff_partial(&f, &Symbol::dependent("y")).is_zero());
        assert!(diff_partial(&f, &Symbol::jet("y", 1)).is_zero());
    }
}
