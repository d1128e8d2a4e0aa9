//! Exact sparse linear algebra over the integers: fraction-free elimination, nullspaces
//! and span membership.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A sparse row: strictly increasing columns, no zero entries.
pub type Row = Vec<(usize, BigInt)>;

fn content(row: &Row) -> BigInt {
    row.iter()
        .fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
}

fn make_primitive(row: &mut Row) {
    let g = content(row);
    if g.is_zero() {
        return;
    }
    let flip = row[0].1.is_negative();
    for (_, c) in row.iter_mut() {
        *c = &*c / &g;
        if flip {
            *c = -&*c;
        }
    }
}

fn entry(row: &Row, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// a·x - b·y, for rows x and y.
fn combine(x: &Row, a: &BigInt, y: &Row, b: &BigInt) -> Row {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) => p.0.cmp(&q.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => unreachable!(),
        };
        let (col, v) = match take {
            std::cmp::Ordering::Less => {
                i += 1;
                (x[i - 1].0, a * &x[i - 1].1)
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (y[j - 1].0, -(b * &y[j - 1].1))
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (x[i - 1].0, a * &x[i - 1].1 - b * &y[j - 1].1)
            }
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

/// Eliminates `col` from `row` using `pivot` (whose leading column is `col`).
fn eliminate(row: &Row, pivot: &Row, col: usize) -> Row {
    let Some(c) = entry(row, col) else {
        return row.clone();
    };
    let lead = &pivot[0].1;
    let g = c.gcd(lead);
    let mut out = combine(row, &(lead / &g), pivot, &(c / &g));
    make_primitive(&mut out);
    out
}

/// Row echelon form built incrementally; pivots keyed by leading column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, Row>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots and inserts it; true when the rank grew.
    pub fn insert(&mut self, mut row: Row) -> bool {
        row.retain(|(_, c)| !c.is_zero());
        loop {
            let Some(&(lead, _)) = row.first() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => row = eliminate(&row, p, lead),
                None => {
                    make_primitive(&mut row);
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Clears every pivot column from the other pivot rows.
    fn reduce(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &pc in &cols {
            let pivot = self.pivots[&pc].clone();
            for (_, row) in self.pivots.range_mut(..pc) {
                if entry(row, pc).is_some() {
                    *row = eliminate(row, &pivot, pc);
                }
            }
        }
    }

    /// Nullspace basis of the inserted rows for `ncols` unknowns, one vector per free
    /// column in increasing order, each scaled so its first nonzero entry is 1.
    pub fn nullspace(mut self, ncols: usize) -> Vec<Vec<BigRational>> {
        self.reduce();
        let mut out = Vec::new();
        for free in 0..ncols {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut v = vec![BigRational::zero(); ncols];
            v[free] = BigRational::one();
            for (&pc, row) in self.pivots.range(..free) {
                if let Some(c) = entry(row, free) {
                    v[pc] = -BigRational::new(c.clone(), row[0].1.clone());
                }
            }
            let first = v.iter().find(|x| !x.is_zero()).cloned().unwrap();
            for x in v.iter_mut() {
                *x = &*x / &first;
            }
            out.push(v);
        }
        out
    }
}

/// Integer row proportional to a rational vector.
pub fn integer_row(v: &[BigRational]) -> Row {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.numer() * (&l / x.denom())))
        .collect()
}

pub fn nullspace(ncols: usize, rows: impl IntoIterator<Item = Row>) -> Vec<Vec<BigRational>> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.nullspace(ncols)
}

/// True when `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<BigRational>], v: &[BigRational]) -> bool {
    let mut e = Echelon::new();
    for b in basis {
        e.insert(integer_row(b));
    }
    !e.insert(integer_row(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn row(v: &[i64]) -> Row {
        v.iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(i, x)| (i, BigInt::from(*x)))
            .collect()
    }

    #[test]
    fn nullspace_of_rank_two_matrix() {
        let rows = vec![row(&[1, 2, 3, 4]), row(&[2, 4, 6, 8]), row(&[0, 1, 1, 1])];
        let ns = nullspace(4, rows.clone());
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for rw in &rows {
                let dot: BigRational = rw.iter().map(|(c, x)| &v[*c] * BigRational::from_integer(x.clone())).sum();
                assert!(dot.is_zero());
            }
            assert!(v.iter().find(|x| !x.is_zero()).unwrap().is_one());
        }
    }

    #[test]
    fn full_rank_has_trivial_nullspace() {
        assert!(nullspace(2, vec![row(&[1, 1]), row(&[1, -1])]).is_empty());
    }

    #[test]
    fn span_membership() {
        let basis = vec![vec![r(1), r(0), r(1)], vec![r(0), r(1), r(1)]];
        assert!(in_span(&basis, &[r(2), r(3), r(5)]));
        assert!(!in_span(&basis, &[r(1), r(1), r(1)]));
        let half = vec![BigRational::new(1.into(), 2.into()), r(1), BigRational::new(3.into(), 2.into())];
        assert!(in_span(&basis, &half));
    }
}
