//! First-order systems, the divergence, Jacobi last multipliers and order raising.

use thiserror::Error;

use crate::expr::{
    determinant, diff_partial, is_zero, substitute, total_derivative, Derivation, Expr,
    ExprError, Field, Symbol, SymbolKind,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JlmError {
    #[error("{variables} variables but {rhs} right-hand sides")]
    LengthMismatch { variables: usize, rhs: usize },
    #[error("right-hand side contains the derivative coordinate `{0}`")]
    DerivativeInRhs(String),
    #[error("Jacobian determinant is zero")]
    SingularJacobian,
    #[error("substituting the inverse does not reproduce the eliminated equation")]
    InverseNotValid,
    #[error("the second derivative cannot be isolated linearly")]
    NotSolvable,
    #[error("order raising needs exactly two variables, found {0}")]
    NotTwoDimensional(usize),
    #[error("`{0}` is not a variable of the system")]
    UnknownVariable(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl JlmError {
    pub fn code(&self) -> &'static str {
        match self {
            JlmError::LengthMismatch { .. } => "LengthMismatch",
            JlmError::DerivativeInRhs(_) => "DerivativeInRhs",
            JlmError::SingularJacobian => "SingularJacobian",
            JlmError::InverseNotValid => "InverseNotValid",
            JlmError::NotSolvable => "NotSolvable",
            JlmError::NotTwoDimensional(_) => "NotTwoDimensional",
            JlmError::UnknownVariable(_) => "UnknownVariable",
            JlmError::Expr(e) => e.code(),
        }
    }
}

/// `w_i' = W_i(t, w_1, ..., w_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderSystem {
    variables: Vec<Symbol>,
    rhs: Vec<Expr>,
}

impl FirstOrderSystem {
    pub fn new(variables: Vec<Symbol>, rhs: Vec<Expr>) -> Result<Self, JlmError> {
        if variables.len() != rhs.len() || variables.is_empty() {
            return Err(JlmError::LengthMismatch {
                variables: variables.len(),
                rhs: rhs.len(),
            });
        }
        for w in &rhs {
            if let Some(s) = w.symbols().into_iter().find(|s| s.is_derivative()) {
                return Err(JlmError::DerivativeInRhs(s.to_string()));
            }
        }
        Ok(FirstOrderSystem { variables, rhs })
    }

    pub fn variables(&self) -> &[Symbol] {
        &self.variables
    }

    pub fn rhs(&self) -> &[Expr] {
        &self.rhs
    }

    /// D_t along solutions: ∂_t + Σ W_i ∂_{w_i}.
    pub fn field(&self) -> Field {
        Field {
            dt: Expr::one(),
            components: self
                .variables
                .iter()
                .cloned()
                .zip(self.rhs.iter().cloned())
                .collect(),
        }
    }
}

/// `y'' = phi(t, y, y')`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderODE {
    dependent: Symbol,
    phi: Expr,
}

impl SecondOrderODE {
    /// Rejects a right-hand side containing y'' or a higher derivative of `dependent`.
    pub fn new(dependent: &str, phi: Expr) -> Result<Self, JlmError> {
        for s in phi.symbols() {
            if s.name() == dependent && matches!(s.kind(), SymbolKind::Derivative(k) if k >= 2) {
                return Err(JlmError::DerivativeInRhs(s.to_string()));
            }
        }
        Ok(SecondOrderODE {
            dependent: Symbol::dependent(dependent),
            phi,
        })
    }

    pub fn phi(&self) -> &Expr {
        &self.phi
    }

    pub fn dependent(&self) -> &Symbol {
        &self.dependent
    }

    pub fn t(&self) -> Symbol {
        Symbol::independent("t")
    }

    pub fn y(&self) -> Symbol {
        self.dependent.clone()
    }

    pub fn yp(&self) -> Symbol {
        Symbol::jet(self.dependent.name(), 1)
    }

    pub fn ypp(&self) -> Symbol {
        Symbol::jet(self.dependent.name(), 2)
    }

    /// The field A = ∂_t + y'∂_y + φ∂_{y'}.
    pub fn field(&self) -> Field {
        Field {
            dt: Expr::one(),
            components: vec![
                (self.y(), Expr::symbol(self.yp())),
                (self.yp(), self.phi.clone()),
            ],
        }
    }

    /// D_t(e) with y'' ↦ φ; `e` may contain y''.
    pub fn on_shell_derivative(&self, e: &Expr) -> Result<Expr, ExprError> {
        self.on_shell(&total_derivative(e))
    }

    /// Substitutes y'' ↦ φ and y''' ↦ A(φ).
    pub fn on_shell(&self, e: &Expr) -> Result<Expr, ExprError> {
        let y3 = Symbol::jet(self.dependent.name(), 3);
        let mut bindings = vec![(self.ypp(), self.phi.clone())];
        if e.contains_symbol(&y3) {
            bindings.push((y3, self.field().apply(&self.phi)));
        }
        substitute(e, &bindings)
    }

    /// The implied system in (y, y_1) with y_1 standing for y'.
    pub fn system(&self) -> FirstOrderSystem {
        let y1 = Symbol::dependent(&format!("{}_1", self.dependent.name()));
        let w2 = substitute(&self.phi, &[(self.yp(), Expr::symbol(y1.clone()))])
            .expect("renaming cannot create a pole");
        FirstOrderSystem::new(vec![self.y(), y1.clone()], vec![Expr::symbol(y1), w2])
            .expect("implied system is well formed")
    }
}

/// Σ ∂W_i/∂w_i.
pub fn divergence(sys: &FirstOrderSystem) -> Expr {
    sys.variables
        .iter()
        .zip(&sys.rhs)
        .fold(Expr::zero(), |acc, (w, rhs)| &acc + &diff_partial(rhs, w))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaJ {
    pub lambda: Expr,
    pub zero_divergence: bool,
}

/// λ_J = ∂φ/∂y'. A zero value is flagged: the multiplier is then a first integral.
pub fn lambda_from_divergence(ode: &SecondOrderODE) -> LambdaJ {
    let lambda = diff_partial(ode.phi(), &ode.yp());
    LambdaJ {
        zero_divergence: lambda.is_zero(),
        lambda,
    }
}

/// A Jacobi last multiplier m = exp(-ω) with ω = ∫Div dt.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplier {
    pub divergence: Expr,
    pub m: Expr,
    pub omega: Expr,
    pub zero_divergence: bool,
}

pub fn multiplier(sys: &FirstOrderSystem) -> Multiplier {
    let divergence = divergence(sys);
    let omega = Expr::integral(&divergence);
    Multiplier {
        zero_divergence: divergence.is_zero(),
        m: Expr::exp(&-&omega),
        omega,
        divergence,
    }
}

/// M_[r] = M_[w] · det ∂(w)/∂(r). The signed determinant is kept.
pub fn transform_multiplier(m: &Expr, jacobian: &[Vec<Expr>]) -> Result<Expr, JlmError> {
    let n = jacobian.len();
    if jacobian.iter().any(|row| row.len() != n) {
        return Err(JlmError::LengthMismatch {
            variables: n,
            rhs: jacobian.iter().map(Vec::len).max().unwrap_or(0),
        });
    }
    let det = determinant(jacobian);
    if is_zero(&det)? {
        return Err(JlmError::SingularJacobian);
    }
    Ok(m * &det)
}

/// Eliminates `solve_for` from a two-variable system using `inverse`, an expression for it
/// in t, the other variable and that variable's derivative.
pub fn raise_order_2d(
    sys: &FirstOrderSystem,
    solve_for: &Symbol,
    inverse: &Expr,
) -> Result<SecondOrderODE, JlmError> {
    let n = sys.variables.len();
    if n != 2 {
        return Err(JlmError::NotTwoDimensional(n));
    }
    let i = sys
        .variables
        .iter()
        .position(|v| v == solve_for)
        .ok_or_else(|| JlmError::UnknownVariable(solve_for.to_string()))?;
    let other = sys.variables[1 - i].clone();
    let other_p = Symbol::jet(other.name(), 1);
    let other_pp = Symbol::jet(other.name(), 2);
    let bind = [(solve_for.clone(), inverse.clone())];

    let identity = &substitute(&sys.rhs[1 - i], &bind)? - &Expr::symbol(other_p);
    if !is_zero(&identity)? {
        return Err(JlmError::InverseNotValid);
    }
    let e = &total_derivative(inverse) - &substitute(&sys.rhs[i], &bind)?;
    let a = diff_partial(&e, &other_pp);
    if a.is_zero() || a.contains_symbol(&other_pp) {
        return Err(JlmError::NotSolvable);
    }
    let b = substitute(&e, &[(other_pp, Expr::zero())])?;
    let phi = (-&b).try_div(&a)?;
    SecondOrderODE::new(other.name(), phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_expr, parse_expr_in, parse_ode, parse_system, Context};

    #[test]
    fn divergence_examples() {
        let vlt = parse_system("r1' = b*exp(r2) + a; r2' = B*exp(r1) + A").unwrap();
        assert!(divergence(&vlt).is_zero());
        let free = parse_system("w1' = w2; w2' = 0").unwrap();
        assert!(divergence(&free).is_zero());
    }

    #[test]
    fn lambda_j_and_zero_flag() {
        let ode = parse_ode("y'' = 0").unwrap();
        let l = lambda_from_divergence(&ode);
        assert!(l.zero_divergence && l.lambda.is_zero());
        let pxv = parse_ode("y'' = y'^2/y + y'/y + r(t)*y^2 - y*(r''(t)/r(t) - r'(t)^2/r(t)^2)")
            .unwrap();
        let l = lambda_from_divergence(&pxv);
        assert_eq!(l.lambda, parse_expr("1/y + 2*y'/y").unwrap());
    }

    #[test]
    fn implied_system_divergence_matches_lambda() {
        let ode = parse_ode("y'' = -2*y*y' + q(t)*y' + q'(t)*y").unwrap();
        let lam = lambda_from_divergence(&ode).lambda;
        let div = divergence(&ode.system());
        let y1 = Symbol::dependent("y_1");
        let back = substitute(&div, &[(y1, Expr::symbol(ode.yp()))]).unwrap();
        assert_eq!(back, lam);
    }

    #[test]
    fn multiplier_eager_for_polynomial_divergence() {
        let sys = parse_system("w1' = t^2*w1; w2' = 0").unwrap();
        let m = multiplier(&sys);
        assert_eq!(m.m, parse_expr("exp(-t^3/3)").unwrap());
        let zero = multiplier(&parse_system("r1' = b*exp(r2) + a; r2' = B*exp(r1) + A").unwrap());
        assert!(zero.zero_divergence && zero.m.is_one());
    }

    #[test]
    fn transform_multiplier_cases() {
        let y = parse_expr("y").unwrap();
        let j = vec![vec![y.clone(), Expr::zero()], vec![Expr::zero(), y.recip().unwrap()]];
        assert!(transform_multiplier(&Expr::one(), &j).unwrap().is_one());
        let sing = vec![vec![y.clone(), y.clone()], vec![y.clone(), y]];
        assert_eq!(
            transform_multiplier(&Expr::one(), &sing),
            Err(JlmError::SingularJacobian)
        );
    }

    #[test]
    fn raise_order_cases() {
        let sys = parse_system("w1' = w2; w2' = w1").unwrap();
        let ctx = Context::with_dependents(&["w1", "w2"]);
        let inv = parse_expr_in("w2'", &ctx).unwrap();
        let ode = raise_order_2d(&sys, &Symbol::dependent("w1"), &inv).unwrap();
        assert_eq!(ode.phi(), &parse_expr_in("w2", &ctx).unwrap());

        let vlt = parse_system("r1' = b*exp(r2) + a; r2' = B*exp(r1) + A").unwrap();
        let ctx = Context::with_dependents(&["r1", "r2"]);
        let bad = parse_expr_in("r2'", &ctx).unwrap();
        assert_eq!(
            raise_order_2d(&vlt, &Symbol::dependent("r1"), &bad),
            Err(JlmError::InverseNotValid)
        );
    }
}
