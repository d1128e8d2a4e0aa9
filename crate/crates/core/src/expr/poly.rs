//! Sparse multivariate polynomials over the integers in a free set of [`Atom`] generators.
//!
//! Terms are kept sorted by descending graded-lexicographic order; the variable order is the
//! [`Atom`] order. Nothing here knows about kernel identities such as exp(u)exp(v) = exp(u+v);
//! those are applied one level up, in the canonical rational form.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::Atom;

/// A power product of atoms, sorted by atom with strictly positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(SmallVec<[(Atom, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn from_atom(atom: Atom, exp: u32) -> Self {
        let mut v = SmallVec::new();
        if exp > 0 {
            v.push((atom, exp));
        }
        Monomial(v)
    }

    pub(crate) fn from_sorted(factors: impl IntoIterator<Item = (Atom, u32)>) -> Self {
        Monomial(factors.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Atom, u32)>) -> Self {
        let mut m = Monomial::one();
        for (a, e) in factors {
            m = m.mul(&Monomial::from_atom(a, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> impl Iterator<Item = &(Atom, u32)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, atom: &Atom) -> u32 {
        self.0
            .iter()
            .find(|(a, _)| a == atom)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.0[i..].iter().cloned());
        out.extend(other.0[j..].iter().cloned());
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for (a, e) in self.0.iter() {
            if j < other.0.len() && other.0[j].0 < *a {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *a {
                let oe = other.0[j].1;
                j += 1;
                match e.cmp(&oe) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((a.clone(), e - oe)),
                }
            } else {
                out.push((a.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1.min(other.0[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let g = self.gcd(other);
        self.mul(other).div(&g).expect("gcd divides the product")
    }

    /// Split off the factor of `atom`: returns (exponent, rest).
    pub fn split(&self, atom: &Atom) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(a, k)| {
                if a == atom {
                    e = *k;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (e, Monomial(rest))
    }

    /// Keep only the factors selected by `keep`; returns (kept, rest).
    pub fn partition(&self, mut keep: impl FnMut(&Atom) -> bool) -> (Monomial, Monomial) {
        let mut a = SmallVec::new();
        let mut b = SmallVec::new();
        for f in self.0.iter() {
            if keep(&f.0) {
                a.push(f.clone());
            } else {
                b.push(f.clone());
            }
        }
        (Monomial(a), Monomial(b))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then exponents in atom order.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match self.0[i].1.cmp(&other.0[j].1) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    o => return o,
                },
            }
        }
        (self.0.len() - i).cmp(&(other.0.len() - j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with integer coefficients; terms sorted by descending monomial, no zero terms.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    terms: Vec<(Monomial, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn atom(a: Atom) -> Self {
        Self::term(Monomial::from_atom(a, 1), BigInt::one())
    }

    /// Build from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut map: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            *map.entry(m).or_insert_with(BigInt::zero) += c;
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            Some(BigInt::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn lead(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn lead_coef_sign_negative(&self) -> bool {
        self.terms.first().map(|t| t.1.is_negative()).unwrap_or(false)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = BTreeSet::new();
        for (m, _) in &self.terms {
            for (a, _) in m.factors() {
                s.insert(a.clone());
            }
        }
        s
    }

    pub fn degree_in(&self, atom: &Atom) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(atom))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().cloned());
        Poly { terms: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // Multiplying by a monomial preserves the term order.
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, k)| (mm.mul(m), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut map: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *map.entry(m1.mul(m2)).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Positive gcd of the integer coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Gcd of all monomials.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_int_exact(&self, c: &BigInt) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k / c)).collect(),
        }
    }

    pub fn div_monomial_exact(&self, m: &Monomial) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, k)| (mm.div(m).expect("monomial divides"), k.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if divisor.terms.len() == 1 {
            let (dm, dc) = &divisor.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.push((m.div(dm)?, q));
            }
            return Some(Poly { terms: out });
        }
        let (lm, lc) = divisor.lead().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.lead().cloned() {
            let qm = rm.div(lm)?;
            let (qc, r) = rc.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(quot))
    }

    /// Coefficients with respect to `atom`: index k holds the coefficient of atom^k.
    pub fn to_univariate(&self, atom: &Atom) -> Vec<Poly> {
        let deg = self.degree_in(atom) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(atom);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_univariate(atom: &Atom, coeffs: &[Poly]) -> Poly {
        let mut acc = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let xm = Monomial::from_atom(atom.clone(), k as u32);
            for (m, v) in c.terms() {
                acc.push((m.mul(&xm), v.clone()));
            }
        }
        Poly::from_terms(acc)
    }

    /// Formal partial derivative with respect to a generator.
    pub fn formal_derivative(&self, atom: &Atom) -> Poly {
        let mut acc = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(atom);
            if e == 0 {
                continue;
            }
            let mm = rest.mul(&Monomial::from_atom(atom.clone(), e - 1));
            acc.push((mm, c * BigInt::from(e)));
        }
        Poly::from_terms(acc)
    }

    /// Sign-normalized copy: leading coefficient positive.
    pub fn positive(&self) -> Poly {
        if self.lead_coef_sign_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Greatest common divisor in the free polynomial ring, leading coefficient positive.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.positive();
        }
        if other.is_zero() {
            return self.positive();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::constant(self.content().gcd(&other.content()));
        }
        if self.terms.len() == 1 || other.terms.len() == 1 {
            let m = self.monomial_content().gcd(&other.monomial_content());
            let c = self.content().gcd(&other.content());
            return Poly::term(m, c);
        }
        if self == other {
            return self.positive();
        }
        let ma = self.monomial_content();
        let mb = other.monomial_content();
        let mg = ma.gcd(&mb);
        let a = self.div_monomial_exact(&ma);
        let b = other.div_monomial_exact(&mb);
        gcd_primitive_monomials(&a, &b).mul_term(&mg, &BigInt::one())
    }
}

/// Gcd of two polynomials whose monomial contents have been removed.
fn gcd_primitive_monomials(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::constant(a.content().gcd(&b.content()));
    }
    if a.terms.len() == 1 || b.terms.len() == 1 {
        return a.gcd(b);
    }
    let atoms_a = a.atoms();
    let atoms_b = b.atoms();
    // An atom missing from one side: the gcd divides every coefficient of the other side
    // in that atom. Folding from the smaller side keeps every intermediate gcd small.
    if let Some(x) = atoms_a.iter().find(|x| !atoms_b.contains(*x)) {
        return fold_gcd(b, &a.to_univariate(x));
    }
    if let Some(x) = atoms_b.iter().find(|x| !atoms_a.contains(*x)) {
        return fold_gcd(a, &b.to_univariate(x));
    }
    // Main variable: the shared atom of least degree keeps the remainder sequence short.
    let x = atoms_a
        .iter()
        .min_by_key(|x| a.degree_in(x).max(b.degree_in(x)))
        .expect("non-constant")
        .clone();
    let ua = a.to_univariate(&x);
    let ub = b.to_univariate(&x);
    let ca = coeff_gcd(&ua);
    let cb = coeff_gcd(&ub);
    let c = ca.gcd(&cb);
    let mut p = primitive(&ua, &ca);
    let mut q = primitive(&ub, &cb);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        if q.len() == 1 {
            // q is free of x: the primitive parts are coprime in x.
            return c;
        }
        let r = pseudo_rem(&p, &q);
        if r.is_empty() {
            break;
        }
        let cr = coeff_gcd(&r);
        p = q;
        q = primitive(&r, &cr);
    }
    let g = Poly::from_univariate(&x, &q);
    let cg = coeff_gcd(&q);
    let g = if cg.is_one() {
        g
    } else {
        g.exact_div(&cg).expect("content divides")
    };
    c.mul(&g).positive()
}

/// gcd(start, coeffs[0], coeffs[1], ...), smallest coefficients first.
fn fold_gcd(start: &Poly, coeffs: &[Poly]) -> Poly {
    let mut order: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    order.sort_by_key(|c| c.len());
    let mut g = start.clone();
    for c in order {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn coeff_gcd(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(coeffs: &[Poly], content: &Poly) -> Vec<Poly> {
    if content.is_one() {
        return coeffs.to_vec();
    }
    coeffs
        .iter()
        .map(|c| c.exact_div(content).expect("content divides coefficient"))
        .collect()
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (k, bc) in b.iter().enumerate() {
            let t = bc.mul(&lr);
            r[k + shift] = r[k + shift].sub(&t);
        }
        trim(&mut r);
    }
    r
}
