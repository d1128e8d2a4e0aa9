use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::expr::{Expr, Monomial, Poly};

/// Deterministic grammar text for a canonical expression. Terms follow the canonical order;
/// a monomial denominator is distributed over the numerator terms.
pub fn render(e: &Expr) -> String {
    let num = e.numer_poly();
    let den = e.denom_poly();
    if num.is_zero() {
        return "0".into();
    }
    if den.len() == 1 {
        let (dm, dc) = &den.terms()[0];
        return render_terms(num, dm, dc);
    }
    format!(
        "({})/({})",
        render_terms(num, &Monomial::one(), &BigInt::one()),
        render_terms(den, &Monomial::one(), &BigInt::one())
    )
}

fn render_terms(p: &Poly, dm: &Monomial, dc: &BigInt) -> String {
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let g = c.gcd(dc);
        let (n, d) = (c / &g, dc / &g);
        let mg = m.gcd(dm);
        let top = m.div(&mg).expect("gcd divides");
        let bottom = dm.div(&mg).expect("gcd divides");
        let body = render_term(&n.abs(), &top, &d, &bottom);
        match (i, n.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn render_term(n: &BigInt, top: &Monomial, d: &BigInt, bottom: &Monomial) -> String {
    let mut factors = Vec::new();
    if !n.is_one() || top.is_one() {
        factors.push(n.to_string());
    }
    factors.extend(monomial_factors(top));
    let mut s = factors.join("*");
    let mut den = Vec::new();
    if !d.is_one() {
        den.push(d.to_string());
    }
    den.extend(monomial_factors(bottom));
    match den.len() {
        0 => {}
        1 => {
            s.push('/');
            s.push_str(&den[0]);
        }
        _ => {
            s.push_str("/(");
            s.push_str(&den.join("*"));
            s.push(')');
        }
    }
    s
}

fn monomial_factors(m: &Monomial) -> Vec<String> {
    m.factors()
        .map(|(a, k)| {
            if *k == 1 {
                a.display().to_string()
            } else if a.is_symbol() || !a.display().contains('^') {
                format!("{}^{}", a.display(), k)
            } else {
                format!("({})^{}", a.display(), k)
            }
        })
        .collect()
}
