use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AtomKind, CompiledExpr, EvalError, Expr, ExprError, Result};

pub const ZERO_TEST_POINTS: usize = 8;
pub const ZERO_TEST_SEED: u64 = 0x5EED;
const MAX_ATTEMPTS: usize = 32;
const ZERO_TOL: f64 = 1e-9;
const NONZERO_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroVerdict {
    /// Decided from the canonical form.
    Exact(bool),
    /// Every sample point evaluated to zero; kernel identities were possible.
    Probabilistic,
}

impl ZeroVerdict {
    pub fn is_zero(self) -> bool {
        matches!(self, ZeroVerdict::Exact(true) | ZeroVerdict::Probabilistic)
    }
}

/// Zero test. Exact when the canonical form is zero or all of its generators are known to
/// be algebraically independent; otherwise evaluates at seeded random rational points.
pub fn zero_test(e: &Expr) -> Result<ZeroVerdict> {
    if e.is_zero() {
        return Ok(ZeroVerdict::Exact(true));
    }
    if e.is_constant() || !has_hidden_relations(e) {
        return Ok(ZeroVerdict::Exact(false));
    }
    numeric_test(e)
}

pub fn is_zero(e: &Expr) -> Result<bool> {
    zero_test(e).map(ZeroVerdict::is_zero)
}

/// Logs, exponentials of kernels, and powers with composite base or kernel exponent may
/// satisfy identities the canonical form does not see.
fn has_hidden_relations(e: &Expr) -> bool {
    let kernel_free = |u: &Expr| u.atoms().iter().all(|a| a.is_symbol());
    e.any_atom(|a| match a.kind() {
        AtomKind::Symbol(_) | AtomKind::Integral(_) => false,
        AtomKind::Log(_) => true,
        AtomKind::Exp(u) => !kernel_free(u),
        AtomKind::Pow { base, exponent } => base.as_symbol().is_none() || !kernel_free(exponent),
    })
}

fn sample(rng: &mut ChaCha8Rng) -> f64 {
    let n: i32 = rng.gen_range(-97..=97);
    let d: i32 = rng.gen_range(1..=97);
    n as f64 / d as f64
}

fn numeric_test(e: &Expr) -> Result<ZeroVerdict> {
    let code = CompiledExpr::new(e);
    let mut rng = ChaCha8Rng::seed_from_u64(ZERO_TEST_SEED);
    let mut zeros = 0;
    for _ in 0..MAX_ATTEMPTS {
        let point: Vec<Complex64> = code
            .leaves()
            .iter()
            .map(|_| Complex64::new(sample(&mut rng), 0.0))
            .collect();
        match code.eval(&point, 1e-12) {
            Ok(v) => {
                let rel = v.numerator.norm() / v.numerator_scale.max(f64::MIN_POSITIVE);
                if rel <= ZERO_TOL {
                    zeros += 1;
                    if zeros == ZERO_TEST_POINTS {
                        return Ok(ZeroVerdict::Probabilistic);
                    }
                } else if rel > NONZERO_TOL {
                    return Ok(ZeroVerdict::Exact(false));
                }
            }
            Err(EvalError::Pole) | Err(EvalError::NonFinite) => continue,
            Err(EvalError::Unbound(s)) => return Err(ExprError::Undecided(s)),
        }
    }
    Err(ExprError::Undecided(format!(
        "{} of {} sample points usable",
        zeros, ZERO_TEST_POINTS
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Symbol;

    fn y() -> Expr {
        Expr::symbol(Symbol::dependent("y"))
    }

    #[test]
    fn exact_paths() {
        let t = Expr::symbol(Symbol::independent("t"));
        let e = &(&Expr::exp(&t) * &Expr::exp(&-&t)) - &Expr::one();
        assert_eq!(zero_test(&e).unwrap(), ZeroVerdict::Exact(true));
        let f = &(&y() * &y()) - &(&y() * &t);
        assert_eq!(zero_test(&f).unwrap(), ZeroVerdict::Exact(false));
    }

    #[test]
    fn exp_of_log_detected_probabilistically() {
        let u = &y() - &Expr::int(3);
        let e = &Expr::exp(&Expr::log(&u).unwrap()) - &u;
        assert_eq!(zero_test(&e).unwrap(), ZeroVerdict::Probabilistic);
        let g = &Expr::exp(&Expr::log(&u).unwrap()) - &y();
        assert_eq!(zero_test(&g).unwrap(), ZeroVerdict::Exact(false));
    }
}
