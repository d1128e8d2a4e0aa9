//! Linear-ansatz solving: exact rational relations among vectors of expressions.
//!
//! Each component is cleared of denominators and its numerator matched coefficient by
//! coefficient over every generator, so a relation is reported only when it holds as a
//! polynomial identity. Relations that rely on identities between kernels are missed,
//! never invented.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::expr::{Expr, Monomial, Poly};
use crate::linalg::{nullspace, Row};

/// Polynomials P_j = L·e_j for a common polynomial multiple L of all denominators,
/// as integer polynomials over one shared positive integer denominator (dropped).
fn cleared(exprs: &[Expr]) -> Vec<Poly> {
    let mut cur: Vec<Expr> = exprs.to_vec();
    for _ in 0..4 {
        if cur.iter().all(|e| e.denom_poly().is_constant()) {
            break;
        }
        let mut l = Poly::one();
        for e in &cur {
            let d = e.denom_poly();
            if d.is_constant() {
                continue;
            }
            let g = l.gcd(d);
            l = l.mul(&d.exact_div(&g).expect("gcd divides"));
        }
        cur = cur
            .par_iter()
            .map(|e| {
                let d = e.denom_poly();
                if d.is_constant() {
                    Expr::from_polys(e.numer_poly().mul(&l), d.clone())
                        .expect("nonzero denominator")
                } else {
                    let q = l.exact_div(d).expect("lcm is divisible by each denominator");
                    Expr::from_poly(e.numer_poly().mul(&q))
                }
            })
            .collect();
    }
    let d = cur.iter().fold(BigInt::one(), |acc, e| {
        acc.lcm(&e.denom_poly().as_constant().expect("denominators cleared"))
    });
    cur.iter()
        .map(|e| {
            let k = &d / e.denom_poly().as_constant().unwrap();
            e.numer_poly().scale(&k)
        })
        .collect()
}

/// All rational vectors x with Σ_j x_j · columns[j] = 0 componentwise, as a nullspace basis
/// normalized so each vector's first nonzero entry is 1.
pub fn rational_relations(columns: &[Vec<Expr>]) -> Vec<Vec<BigRational>> {
    let n = columns.len();
    if n == 0 {
        return Vec::new();
    }
    let width = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut rows: BTreeMap<(usize, Monomial), Row> = BTreeMap::new();
    for i in 0..width {
        let comp: Vec<Expr> = columns
            .iter()
            .map(|c| c.get(i).cloned().unwrap_or_else(Expr::zero))
            .collect();
        let polys = cleared(&comp);
        for (j, p) in polys.iter().enumerate() {
            for (m, c) in p.terms() {
                rows.entry((i, m.clone())).or_default().push((j, c.clone()));
            }
        }
    }
    nullspace(n, rows.into_values())
}

/// Rational coordinates x with Σ x_j span[j] = target, if any.
pub fn express_in_span(span: &[Vec<Expr>], target: &[Expr]) -> Option<Vec<BigRational>> {
    let mut cols: Vec<Vec<Expr>> = vec![target.to_vec()];
    cols.extend(span.iter().cloned());
    let rel = rational_relations(&cols);
    // Nullspace vectors are in reduced form: at most one has a nonzero first entry.
    let v = rel.into_iter().find(|v| !v[0].is_zero())?;
    let scale = -v[0].clone();
    Some(v[1..].iter().map(|x| x / &scale).collect())
}

pub fn in_span(span: &[Vec<Expr>], target: &[Expr]) -> bool {
    target.iter().all(Expr::is_zero) || express_in_span(span, target).is_some()
}

/// Σ x_j · gens[j].
pub fn combine(x: &[BigRational], gens: &[Expr]) -> Expr {
    x.iter()
        .zip(gens)
        .filter(|(c, _)| !c.is_zero())
        .fold(Expr::zero(), |acc, (c, g)| &acc + &g.scale(c))
}
