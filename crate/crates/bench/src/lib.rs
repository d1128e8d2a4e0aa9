//! Shared inputs for the criterion benchmarks under `benches/`.

use lamsym::parse::{parse_expr_in, parse_ode, Context};
use lamsym::{Expr, SecondOrderODE};

pub const PAINLEVE_V: &str = "y'' = -2*y*y' + q(t)*y' + q'(t)*y";
pub const EX4: &str = "y'' = (t*y' - t*y^2 + y^2)*exp(-1/y) + 2*y'^2/y + y'";

pub fn ode(text: &str) -> SecondOrderODE {
    parse_ode(text).expect("benchmark equations parse")
}

pub fn expr(text: &str) -> Expr {
    parse_expr_in(text, &Context::with_dependents(&["y"])).expect("benchmark expressions parse")
}

/// A rational expression with shared denominator factors, a stress case for gcd cancellation.
pub fn gcd_heavy() -> Expr {
    expr("(y' + t*y)^3/((y - t)^2*(y + 1)) + (y - t)/(y + 1)^2 - y'^2/((y - t)*(y + 1))")
}
