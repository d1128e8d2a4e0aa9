//! λ-prolongation, the determining equation, an ansatz solver for it, and the equivalence
//! test between λ-symmetries.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::ansatz::{combine, rational_relations};
use crate::expr::{
    diff_partial, is_zero, AtomKind, Derivation, Expr, ExprError, Field, SymbolKind,
};
use crate::jlm::SecondOrderODE;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LambdaError {
    #[error("point field component depends on `{0}`")]
    NotPointField(String),
    #[error("right-hand side is not rational in the first derivative")]
    NotRationalInYPrime,
    #[error("ansatz basis is empty")]
    EmptyBasis,
    #[error("no λ-symmetry in the span of the ansatz basis")]
    EmptyResult,
    #[error("({tau}, {eta}) with λ = {lambda} is not a λ-symmetry")]
    NotASymmetry {
        tau: String,
        eta: String,
        lambda: String,
    },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl LambdaError {
    pub fn code(&self) -> &'static str {
        match self {
            LambdaError::NotPointField(_) => "NotPointField",
            LambdaError::NotRationalInYPrime => "NotRationalInYPrime",
            LambdaError::EmptyBasis => "EmptyBasis",
            LambdaError::EmptyResult => "EmptyResult",
            LambdaError::NotASymmetry { .. } => "NotASymmetry",
            LambdaError::Expr(e) => e.code(),
        }
    }
}

/// X = τ∂_t + η∂_y with τ, η free of derivative coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointField {
    pub tau: Expr,
    pub eta: Expr,
}

impl PointField {
    pub fn new(tau: Expr, eta: Expr) -> Result<Self, LambdaError> {
        for c in [&tau, &eta] {
            if let Some(s) = c.symbols().into_iter().find(|s| s.is_derivative()) {
                return Err(LambdaError::NotPointField(s.to_string()));
            }
        }
        Ok(PointField { tau, eta })
    }

    /// Q = η − y'τ.
    pub fn characteristic(&self, ode: &SecondOrderODE) -> Expr {
        &self.eta - &(&Expr::symbol(ode.yp()) * &self.tau)
    }

    pub fn is_zero(&self) -> bool {
        self.tau.is_zero() && self.eta.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSymmetry {
    pub field: PointField,
    pub lambda: Expr,
    pub q: Expr,
}

impl LambdaSymmetry {
    /// Checks the determining equation before accepting the pair.
    pub fn certify(
        ode: &SecondOrderODE,
        field: PointField,
        lambda: Expr,
    ) -> Result<Self, LambdaError> {
        let r = determining_residual(ode, &field, &lambda)?;
        if !is_zero(&r)? {
            return Err(LambdaError::NotASymmetry {
                tau: field.tau.to_string(),
                eta: field.eta.to_string(),
                lambda: lambda.to_string(),
            });
        }
        Ok(Self::unchecked(ode, field, lambda))
    }

    pub(crate) fn unchecked(ode: &SecondOrderODE, field: PointField, lambda: Expr) -> Self {
        LambdaSymmetry {
            q: field.characteristic(ode),
            field,
            lambda,
        }
    }
}

/// Candidate functions of (t, y) for the linear ansatz.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzBasis {
    generators: Vec<Expr>,
    window: i32,
}

impl AnsatzBasis {
    /// Drops zeros and generators proportional to an earlier one.
    pub fn new(generators: impl IntoIterator<Item = Expr>, window: i32) -> Self {
        let mut seen = HashSet::new();
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_zero() && seen.insert(g.monic()))
            .collect();
        AnsatzBasis { generators, window }
    }

    /// t^a·y^b for a, b in [−window, window].
    pub fn monomials(ode: &SecondOrderODE, window: i32) -> Self {
        let t = Expr::symbol(ode.t());
        let y = Expr::symbol(ode.y());
        let mut gens = Vec::new();
        for a in -window..=window {
            for b in -window..=window {
                let m = &t.powi(a as i64).unwrap() * &y.powi(b as i64).unwrap();
                gens.push(m);
            }
        }
        AnsatzBasis::new(gens, window)
    }

    /// Monomials times each factor in {1} ∪ {kernel atoms and arbitrary functions of φ free
    /// of y'} ∪ `hints`.
    pub fn default_for(ode: &SecondOrderODE, window: i32, hints: &[Expr]) -> Self {
        let mono = Self::monomials(ode, window);
        let mut factors = vec![Expr::one()];
        factors.extend(harvest(ode));
        factors.extend(hints.iter().cloned());
        let gens = factors
            .iter()
            .flat_map(|f| mono.generators.iter().map(move |m| m * f))
            .collect::<Vec<_>>();
        AnsatzBasis::new(gens, window)
    }

    pub fn generators(&self) -> &[Expr] {
        &self.generators
    }

    pub fn window(&self) -> i32 {
        self.window
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Kernel atoms and arbitrary-function symbols of φ that do not involve y'.
pub fn harvest(ode: &SecondOrderODE) -> Vec<Expr> {
    let yp = ode.yp();
    ode.phi()
        .atoms()
        .into_iter()
        .filter(|a| match a.kind() {
            AtomKind::Symbol(s) => s.is_function(),
            _ => true,
        })
        .map(Expr::from_atom)
        .filter(|e| !e.contains_symbol(&yp))
        .collect()
}

/// ∂φ/∂t, ∂φ/∂y, ∂φ/∂y', computed once per equation.
pub(crate) struct PhiPartials {
    t: Expr,
    y: Expr,
    yp: Expr,
}

impl PhiPartials {
    pub(crate) fn new(ode: &SecondOrderODE) -> Self {
        PhiPartials {
            t: diff_partial(ode.phi(), &ode.t()),
            y: diff_partial(ode.phi(), &ode.y()),
            yp: diff_partial(ode.phi(), &ode.yp()),
        }
    }
}

/// (A + λ)e with A = ∂_t + y'∂_y + φ∂_{y'}.
fn shifted(a: &Field, lambda: &Expr, e: &Expr) -> Expr {
    &a.apply(e) + &(lambda * e)
}

/// [η⁽¹⁾, η⁽²⁾] up to `order`, with η⁽ᵏ⁺¹⁾ = (D_t+λ)η⁽ᵏ⁾ − y⁽ᵏ⁺¹⁾(D_t+λ)τ on-shell.
pub fn lambda_prolong(
    field: &PointField,
    lambda: &Expr,
    order: u32,
    ode: &SecondOrderODE,
) -> Vec<Expr> {
    assert!((1..=2).contains(&order), "prolongation order is 1 or 2");
    let a = ode.field();
    let dtau = shifted(&a, lambda, &field.tau);
    let eta1 = &shifted(&a, lambda, &field.eta) - &(&Expr::symbol(ode.yp()) * &dtau);
    if order == 1 {
        return vec![eta1];
    }
    let eta2 = &shifted(&a, lambda, &eta1) - &(ode.phi() * &dtau);
    vec![eta1, eta2]
}

/// η⁽²⁾ − (τ∂_t + η∂_y + η⁽¹⁾∂_{y'})φ on-shell; zero iff (X, λ) is a λ-symmetry.
pub fn determining_residual(
    ode: &SecondOrderODE,
    field: &PointField,
    lambda: &Expr,
) -> Result<Expr, ExprError> {
    Ok(residual_with(ode, &PhiPartials::new(ode), field, lambda))
}

pub(crate) fn residual_with(
    ode: &SecondOrderODE,
    phi: &PhiPartials,
    field: &PointField,
    lambda: &Expr,
) -> Expr {
    let pr = lambda_prolong(field, lambda, 2, ode);
    let applied = &(&(&field.tau * &phi.t) + &(&field.eta * &phi.y)) + &(&pr[0] * &phi.yp);
    &pr[1] - &applied
}

fn check_rational_in_yp(ode: &SecondOrderODE) -> Result<(), LambdaError> {
    let yp = ode.yp();
    for a in ode.phi().all_atoms() {
        if a.args().iter().any(|u| u.contains_symbol(&yp)) {
            return Err(LambdaError::NotRationalInYPrime);
        }
    }
    Ok(())
}

/// λ-symmetries with τ, η in the span of `basis`, one per nullspace vector of the matched
/// coefficient system. Unknowns are ordered τ-coefficients then η-coefficients, and each
/// vector is scaled so its first nonzero coefficient is 1. Every result is re-verified.
pub fn solve_determining(
    ode: &SecondOrderODE,
    lambda: &Expr,
    basis: &AnsatzBasis,
) -> Result<Vec<LambdaSymmetry>, LambdaError> {
    check_rational_in_yp(ode)?;
    if basis.is_empty() {
        return Err(LambdaError::EmptyBasis);
    }
    let n = basis.len();
    let phi = PhiPartials::new(ode);
    let residuals: Vec<Vec<Expr>> = (0..2 * n)
        .into_par_iter()
        .map(|j| {
            let g = basis.generators[j % n].clone();
            let field = if j < n {
                PointField {
                    tau: g,
                    eta: Expr::zero(),
                }
            } else {
                PointField {
                    tau: Expr::zero(),
                    eta: g,
                }
            };
            vec![residual_with(ode, &phi, &field, lambda)]
        })
        .collect();
    let relations = rational_relations(&residuals);
    if relations.is_empty() {
        return Err(LambdaError::EmptyResult);
    }
    relations
        .par_iter()
        .map(|x| {
            let field = PointField {
                tau: combine(&x[..n], basis.generators()),
                eta: combine(&x[n..], basis.generators()),
            };
            LambdaSymmetry::certify(ode, field, lambda.clone())
        })
        .collect()
}

/// Q₁(A+λ₂)(Q₂) − Q₂(A+λ₁)(Q₁).
pub fn equivalence_residual(ode: &SecondOrderODE, s1: &LambdaSymmetry, s2: &LambdaSymmetry) -> Expr {
    let a = ode.field();
    let left = &s1.q * &shifted(&a, &s2.lambda, &s2.q);
    let right = &s2.q * &shifted(&a, &s1.lambda, &s1.q);
    &left - &right
}

pub fn is_equivalent(
    ode: &SecondOrderODE,
    s1: &LambdaSymmetry,
    s2: &LambdaSymmetry,
) -> Result<bool, ExprError> {
    is_zero(&equivalence_residual(ode, s1, s2))
}

/// Labels symmetries by equivalence class, in order of first appearance.
pub fn equivalence_classes(
    ode: &SecondOrderODE,
    syms: &[LambdaSymmetry],
) -> Result<Vec<usize>, ExprError> {
    let mut reps: Vec<usize> = Vec::new();
    let mut labels = Vec::with_capacity(syms.len());
    for (i, s) in syms.iter().enumerate() {
        let mut label = None;
        for (k, &r) in reps.iter().enumerate() {
            if is_equivalent(ode, &syms[r], s)? {
                label = Some(k);
                break;
            }
        }
        labels.push(label.unwrap_or_else(|| {
            reps.push(i);
            reps.len() - 1
        }));
    }
    Ok(labels)
}

/// True when every symbol of `e` is t, the dependent variable, a parameter or a function.
pub fn is_point_function(e: &Expr, ode: &SecondOrderODE) -> bool {
    e.symbols().iter().all(|s| match s.kind() {
        SymbolKind::Derivative(_) => false,
        SymbolKind::Dependent => *s == ode.y(),
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jlm::lambda_from_divergence;
    use crate::parse::{parse_expr, parse_ode};

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn prolongation_of_kamke_field() {
        let ode = parse_ode("y'' = y'^2/y + f'(t)*y^(p+1) + p*f(t)*y'*y^p").unwrap();
        let lam = lambda_from_divergence(&ode).lambda;
        let x = PointField::new(Expr::zero(), e("1/y")).unwrap();
        let pr = lambda_prolong(&x, &lam, 1, &ode);
        assert_eq!(pr[0], e("p*y^(p-1)*f(t) + y'/y^2"));
    }

    #[test]
    fn classical_translation_in_t() {
        let ode = parse_ode("y'' = y").unwrap();
        let x = PointField::new(Expr::one(), Expr::zero()).unwrap();
        assert!(lambda_prolong(&x, &Expr::zero(), 1, &ode)[0].is_zero());
    }

    #[test]
    fn painleve_v_residuals() {
        let ode = parse_ode("y'' = -2*y*y' + q(t)*y' + q'(t)*y").unwrap();
        let x = PointField::new(Expr::zero(), Expr::one()).unwrap();
        let lam = e("-2*y + q(t)");
        assert!(determining_residual(&ode, &x, &lam).unwrap().is_zero());
        assert!(!determining_residual(&ode, &x, &Expr::zero()).unwrap().is_zero());
    }

    #[test]
    fn solver_recovers_translation_for_free_particle() {
        let ode = parse_ode("y'' = 0").unwrap();
        let basis = AnsatzBasis::monomials(&ode, 1);
        let syms = solve_determining(&ode, &Expr::zero(), &basis).unwrap();
        // The projective algebra of y'' = 0 restricted to this window.
        let span: Vec<Vec<Expr>> = syms
            .iter()
            .map(|s| vec![s.field.tau.clone(), s.field.eta.clone()])
            .collect();
        assert!(crate::ansatz::in_span(&span, &[Expr::one(), Expr::zero()]));
        assert!(crate::ansatz::in_span(&span, &[e("t"), e("y")]));
    }

    #[test]
    fn equivalence_is_reflexive() {
        let ode = parse_ode("y'' = -2*y*y' + q(t)*y' + q'(t)*y").unwrap();
        let s = LambdaSymmetry::certify(
            &ode,
            PointField::new(Expr::zero(), Expr::one()).unwrap(),
            e("-2*y + q(t)"),
        )
        .unwrap();
        assert!(is_equivalent(&ode, &s, &s).unwrap());
    }
}
