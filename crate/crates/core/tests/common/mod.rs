#![allow(dead_code)]

use lamsym::expr::{Kernel, Tree};
use lamsym::Symbol;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn leaf(symbols: Vec<Symbol>) -> BoxedStrategy<Tree> {
    prop_oneof![
        (-5i64..=5).prop_map(Tree::int),
        ((-5i64..=5), (1i64..=4)).prop_map(|(n, d)| Tree::Num(rational(n, d))),
        proptest::sample::select(symbols).prop_map(Tree::Sym),
    ]
    .boxed()
}

/// Random trees over `symbols` with depth at most 6; exp and the occasional non-integer power
/// appear as kernels.
pub fn tree_over(symbols: Vec<Symbol>) -> BoxedStrategy<Tree> {
    leaf(symbols.clone())
        .prop_recursive(5, 24, 3, move |inner| {
            prop_oneof![
                3 => proptest::collection::vec(inner.clone(), 2..=3).prop_map(Tree::Add),
                3 => proptest::collection::vec(inner.clone(), 2..=3).prop_map(Tree::Mul),
                1 => inner.clone().prop_map(|t| Tree::Neg(Box::new(t))),
                2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::div(a, b)),
                2 => (inner.clone(), 0i64..=3).prop_map(|(a, k)| Tree::pow(a, Tree::int(k))),
                1 => inner.clone().prop_map(|a| Tree::apply(Kernel::Exp, a)),
            ]
        })
        .boxed()
}

pub fn t() -> Symbol {
    Symbol::independent("t")
}

pub fn y() -> Symbol {
    Symbol::dependent("y")
}

pub fn yp() -> Symbol {
    Symbol::jet("y", 1)
}

pub fn jet_symbols() -> Vec<Symbol> {
    vec![t(), y(), yp(), Symbol::parameter("a"), Symbol::function("f", 0)]
}

pub fn point_symbols() -> Vec<Symbol> {
    vec![t(), y(), Symbol::parameter("a")]
}

pub fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        max_global_rejects: 100_000,
        ..ProptestConfig::default()
    }
}
