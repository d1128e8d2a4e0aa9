//! λ-symmetries of scalar second-order ODEs from the Jacobi last multiplier, and the first
//! integrals they yield through order reduction.

pub mod ansatz;
pub mod expr;
pub mod jlm;
pub mod lambda;
pub mod linalg;
pub mod parse;
pub mod reduce;

pub use expr::{Expr, ExprError, Symbol, SymbolKind};
pub use jlm::{FirstOrderSystem, JlmError, LambdaJ, Multiplier, SecondOrderODE};
pub use lambda::{AnsatzBasis, LambdaError, LambdaSymmetry, PointField};
pub use parse::{parse_expr, parse_ode, parse_system, Context, ParseError};
pub use reduce::{FirstIntegral, InvariantPair, ReduceError};

/// Any library failure, with a stable machine-readable code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jlm(#[from] JlmError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(e) => e.code(),
            Error::Expr(e) => e.code(),
            Error::Jlm(e) => e.code(),
            Error::Lambda(e) => e.code(),
            Error::Reduce(e) => e.code(),
        }
    }
}
