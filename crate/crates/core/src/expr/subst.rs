use std::collections::HashMap;

use super::diff::total_derivative;
use super::{Atom, AtomKind, Expr, Monomial, Poly, Result, Symbol};

/// Simultaneous substitution of symbols, then normalization. Kernel arguments are rewritten
/// recursively and the kernels rebuilt through their simplifying constructors.
pub fn substitute(e: &Expr, bindings: &[(Symbol, Expr)]) -> Result<Expr> {
    if bindings.is_empty() {
        return Ok(e.clone());
    }
    Substituter {
        bindings,
        memo: HashMap::new(),
    }
    .expr(e)
}

struct Substituter<'a> {
    bindings: &'a [(Symbol, Expr)],
    memo: HashMap<Atom, Option<Expr>>,
}

impl Substituter<'_> {
    fn expr(&mut self, e: &Expr) -> Result<Expr> {
        let n = self.poly(e.numer_poly())?;
        let d = self.poly(e.denom_poly())?;
        n.try_div(&d)
    }

    fn poly(&mut self, p: &Poly) -> Result<Expr> {
        // Group terms by the part of the monomial whose atoms change.
        let mut groups: Vec<(Monomial, Vec<(Monomial, num_bigint::BigInt)>)> = Vec::new();
        let mut index: HashMap<Monomial, usize> = HashMap::new();
        for (m, c) in p.terms() {
            let mut changed = Vec::new();
            let mut kept = Vec::new();
            for (a, k) in m.factors() {
                if self.image(a)?.is_some() {
                    changed.push((a.clone(), *k));
                } else {
                    kept.push((a.clone(), *k));
                }
            }
            let key = Monomial::from_sorted(changed);
            let slot = *index.entry(key.clone()).or_insert_with(|| {
                groups.push((key, Vec::new()));
                groups.len() - 1
            });
            groups[slot].1.push((Monomial::from_sorted(kept), c.clone()));
        }
        let mut acc = Expr::zero();
        for (key, terms) in groups {
            let mut factor = Expr::one();
            for (a, k) in key.factors() {
                let img = self.image(a)?.expect("changed atom has an image");
                factor = &factor * &img.powi(*k as i64)?;
            }
            let rest = Expr::from_poly(Poly::from_terms(terms));
            acc = &acc + &(&factor * &rest);
        }
        Ok(acc)
    }

    /// The new value of an atom, or `None` when it is unchanged.
    fn image(&mut self, a: &Atom) -> Result<Option<Expr>> {
        if let Some(v) = self.memo.get(a) {
            return Ok(v.clone());
        }
        let v = match a.kind() {
            AtomKind::Symbol(s) => self
                .bindings
                .iter()
                .find(|(k, _)| k == s)
                .map(|(_, v)| v.clone()),
            _ => {
                let args: Vec<Expr> = a.args().into_iter().cloned().collect();
                let new: Vec<Expr> = args
                    .iter()
                    .map(|u| self.expr(u))
                    .collect::<Result<_>>()?;
                if new == args {
                    None
                } else {
                    Some(match a.kind() {
                        AtomKind::Exp(_) => Expr::exp(&new[0]),
                        AtomKind::Log(_) => Expr::log(&new[0])?,
                        AtomKind::Integral(_) => Expr::integral(&new[0]),
                        AtomKind::Pow { .. } => Expr::pow(&new[0], &new[1])?,
                        AtomKind::Symbol(_) => unreachable!(),
                    })
                }
            }
        };
        self.memo.insert(a.clone(), v.clone());
        Ok(v)
    }
}

/// Bindings f ↦ g, f′ ↦ g′, …, f^(order) ↦ g^(order) for an arbitrary function f of t.
pub fn function_specialization(name: &str, g: &Expr, order: u32) -> Vec<(Symbol, Expr)> {
    let mut out = Vec::new();
    let mut cur = g.clone();
    for d in 0..=order {
        out.push((Symbol::function(name, d), cur.clone()));
        cur = total_derivative(&cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &Symbol) -> Expr {
        Expr::symbol(x.clone())
    }

    #[test]
    fn numeric_substitution() {
        let (t, y, yp) = (
            Symbol::independent("t"),
            Symbol::dependent("y"),
            Symbol::jet("y", 1),
        );
        let e = &(&(&s(&y) * &s(&y)) - &(&s(&y) * &s(&t))) + &s(&yp);
        let out = substitute(
            &e,
            &[(y, Expr::int(2)), (t, Expr::int(3)), (yp, Expr::int(5))],
        )
        .unwrap();
        assert_eq!(out, Expr::int(3));
    }

    #[test]
    fn simultaneous_swap() {
        let (a, b) = (Symbol::parameter("a"), Symbol::parameter("b"));
        let e = &s(&a) - &(&Expr::int(2) * &s(&b));
        let out = substitute(&e, &[(a.clone(), s(&b)), (b.clone(), s(&a))]).unwrap();
        assert_eq!(out, &s(&b) - &(&Expr::int(2) * &s(&a)));
    }

    #[test]
    fn substitution_inside_kernels() {
        let y = Symbol::dependent("y");
        let e = Expr::exp(&s(&y));
        let out = substitute(&e, &[(y, Expr::zero())]).unwrap();
        assert!(out.is_one());
    }

    #[test]
    fn zero_denominator_reported() {
        let y = Symbol::dependent("y");
        let e = s(&y).recip().unwrap();
        assert!(substitute(&e, &[(y, Expr::zero())]).is_err());
    }

    #[test]
    fn specialization_bindings() {
        let t = s(&Symbol::independent("t"));
        let b = function_specialization("q", &(&t * &t), 2);
        assert_eq!(b.len(), 3);
        assert_eq!(b[1].1, &Expr::int(2) * &t);
        assert_eq!(b[2].1, Expr::int(2));
    }
}
