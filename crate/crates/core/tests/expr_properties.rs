mod common;

use common::*;
use lamsym::expr::{
    collect, diff_partial, normalize, reassemble, substitute, total_derivative, Atom, Expr, Tree,
};
use lamsym::parse::{parse_expr, parse_tree, render, Context};
use lamsym::Symbol;
use proptest::prelude::*;

fn normalized(tree: &Tree) -> Option<Expr> {
    normalize(tree).ok()
}

proptest! {
    #![proptest_config(cases(1000))]

    #[test]
    fn normalize_is_idempotent(tree in tree_over(jet_symbols())) {
        let Some(e) = normalized(&tree) else { return Err(TestCaseError::reject("zero denominator")) };
        let again = normalize(&Tree::from_expr(&e)).unwrap();
        prop_assert_eq!(again, e);
    }

    #[test]
    fn collect_round_trips(
        coeffs in proptest::collection::vec(tree_over(point_symbols()), 1..=3),
    ) {
        let w = Expr::symbol(yp());
        let mut e = Expr::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let Some(c) = normalized(c) else { return Err(TestCaseError::reject("zero denominator")) };
            e = &e + &(&c * &w.powi(k as i64).unwrap());
        }
        let map = collect(&e, &[Atom::symbol(yp())]).unwrap();
        prop_assert!(map.iter().all(|(_, c)| !c.is_zero()));
        prop_assert_eq!(reassemble(&map), e);
    }

    #[test]
    fn render_round_trips(tree in tree_over(jet_symbols())) {
        let Some(e) = normalized(&tree) else { return Err(TestCaseError::reject("zero denominator")) };
        prop_assert_eq!(parse_expr(&render(&e)).unwrap(), e);
    }
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn differentiation_is_linear(
        a in tree_over(jet_symbols()),
        b in tree_over(jet_symbols()),
        alpha in (-9i64..=9, 1i64..=9),
        beta in (-9i64..=9, 1i64..=9),
    ) {
        let (Some(a), Some(b)) = (normalized(&a), normalized(&b)) else {
            return Err(TestCaseError::reject("zero denominator"));
        };
        let (al, be) = (rational(alpha.0, alpha.1), rational(beta.0, beta.1));
        for s in [t(), y(), yp()] {
            let lhs = diff_partial(&(&a.scale(&al) + &b.scale(&be)), &s);
            let rhs = &diff_partial(&a, &s).scale(&al) + &diff_partial(&b, &s).scale(&be);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn total_derivative_obeys_leibniz(a in tree_over(jet_symbols()), b in tree_over(jet_symbols())) {
        let (Some(a), Some(b)) = (normalized(&a), normalized(&b)) else {
            return Err(TestCaseError::reject("zero denominator"));
        };
        let lhs = total_derivative(&(&a * &b));
        let rhs = &(&a * &total_derivative(&b)) + &(&b * &total_derivative(&a));
        prop_assert!(lamsym::expr::is_zero(&(&lhs - &rhs)).unwrap());
    }

    #[test]
    fn partial_derivative_commutes_with_disjoint_substitution(
        e in tree_over(jet_symbols()),
        g in tree_over(vec![t(), Symbol::parameter("b")]),
    ) {
        let (Some(e), Some(g)) = (normalized(&e), normalized(&g)) else {
            return Err(TestCaseError::reject("zero denominator"));
        };
        let binding = [(Symbol::parameter("a"), g)];
        let (Ok(first), Ok(second)) = (
            substitute(&diff_partial(&e, &y()), &binding),
            substitute(&e, &binding).map(|s| diff_partial(&s, &y())),
        ) else {
            return Err(TestCaseError::reject("substitution hit a zero denominator"));
        };
        prop_assert_eq!(first, second);
    }

    #[test]
    fn syntax_error_offsets_lie_inside_input(s in "[ty'()+*/^0-9a-z, -]{1,16}") {
        if let Err(err) = parse_tree(&s, &Context::default()) {
            prop_assert!(err.offset < s.len(), "offset {} for {:?}", err.offset, s);
        }
    }
}
