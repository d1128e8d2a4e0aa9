use std::collections::BTreeMap;

use super::{Atom, Expr, ExprError, Monomial, Poly, Result};

/// Coefficients of an expression viewed as a polynomial in chosen generators.
/// Keys are monomials in those generators only; no coefficient is zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoefficientMap {
    entries: BTreeMap<Monomial, Expr>,
}

impl CoefficientMap {
    pub fn get(&self, key: &Monomial) -> Option<&Expr> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Expr)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn into_values(self) -> impl Iterator<Item = Expr> {
        self.entries.into_values()
    }
}

pub fn collect(e: &Expr, generators: &[Atom]) -> Result<CoefficientMap> {
    let is_gen = |a: &Atom| generators.contains(a);
    for a in e.denom_poly().atoms() {
        if is_gen(&a) {
            return Err(ExprError::NotPolynomialInGenerators(a.to_string()));
        }
    }
    for a in e.atoms() {
        for arg in a.args() {
            if let Some(g) = arg.all_atoms().into_iter().find(|x| is_gen(x)) {
                return Err(ExprError::NotPolynomialInGenerators(g.to_string()));
            }
        }
    }
    let mut parts: BTreeMap<Monomial, Vec<(Monomial, num_bigint::BigInt)>> = BTreeMap::new();
    for (m, c) in e.numer_poly().terms() {
        let (key, rest) = m.partition(is_gen);
        parts.entry(key).or_default().push((rest, c.clone()));
    }
    let den = e.denom_poly();
    let entries = parts
        .into_iter()
        .map(|(k, terms)| {
            let c = Expr::from_polys(Poly::from_terms(terms), den.clone())
                .expect("canonical denominator is nonzero");
            (k, c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(CoefficientMap { entries })
}

pub fn reassemble(map: &CoefficientMap) -> Expr {
    map.iter().fold(Expr::zero(), |acc, (m, c)| {
        let mono = Expr::from_poly(Poly::term(m.clone(), 1.into()));
        &acc + &(&mono * c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Symbol;

    #[test]
    fn collects_quadratic_in_yprime() {
        let p = |n: &str| Expr::symbol(Symbol::parameter(n));
        let yp_sym = Symbol::jet("y", 1);
        let yp = Expr::symbol(yp_sym.clone());
        let e = &(&(&p("a") * &(&yp * &yp)) + &(&p("b") * &yp)) + &p("c");
        let g = [Atom::symbol(yp_sym.clone())];
        let map = collect(&e, &g).unwrap();
        assert_eq!(map.len(), 3);
        let key2 = Monomial::from_atom(g[0].clone(), 2);
        assert_eq!(map.get(&key2), Some(&p("a")));
        assert_eq!(map.get(&Monomial::one()), Some(&p("c")));
        assert_eq!(reassemble(&map), e);
        assert!(collect(&Expr::zero(), &g).unwrap().is_empty());
    }

    #[test]
    fn generator_in_denominator_rejected() {
        let y_sym = Symbol::dependent("y");
        let e = Expr::symbol(y_sym.clone()).recip().unwrap();
        assert!(matches!(
            collect(&e, &[Atom::symbol(y_sym)]),
            Err(ExprError::NotPolynomialInGenerators(_))
        ));
    }
}
