use lamsym::expr::ExprError;
use lamsym::{JlmError, LambdaError, ParseError, ReduceError};
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_EMPTY: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;
pub const EXIT_NUMERIC: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("corpus entry `{id}`: {message}")]
    CorpusParse { id: String, message: String },
    #[error("invalid argument: {0}")]
    BadArgument(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jlm(#[from] JlmError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse(e) => e.code(),
            CliError::CorpusParse { .. } => "CorpusParseError",
            CliError::BadArgument(_) => "BadArgument",
            CliError::Expr(e) => e.code(),
            CliError::Jlm(e) => e.code(),
            CliError::Lambda(e) => e.code(),
            CliError::Reduce(e) => e.code(),
            CliError::Verification(_) => "VerificationFailed",
        }
    }

    /// 2 parse, 3 empty solver result, 4 verification failure, 5 numeric failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::CorpusParse { .. } | CliError::BadArgument(_) => EXIT_PARSE,
            CliError::Expr(e) => expr_exit(e),
            CliError::Jlm(e) => match e {
                JlmError::NotSolvable => EXIT_EMPTY,
                JlmError::InverseNotValid | JlmError::SingularJacobian => EXIT_VERIFY,
                JlmError::Expr(e) => expr_exit(e),
                _ => EXIT_PARSE,
            },
            CliError::Lambda(e) => match e {
                LambdaError::EmptyBasis | LambdaError::EmptyResult => EXIT_EMPTY,
                LambdaError::NotASymmetry { .. } => EXIT_VERIFY,
                LambdaError::Expr(e) => expr_exit(e),
                _ => EXIT_PARSE,
            },
            CliError::Reduce(e) => match e {
                ReduceError::InsufficientBasis
                | ReduceError::NoMatchInBasis
                | ReduceError::NotQuadrable => EXIT_EMPTY,
                ReduceError::PoleEncountered(_)
                | ReduceError::NonFiniteState(_)
                | ReduceError::Unbound(_) => EXIT_NUMERIC,
                ReduceError::Expr(e) => expr_exit(e),
            },
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }
}

fn expr_exit(e: &ExprError) -> u8 {
    match e {
        ExprError::Undecided(_) => EXIT_VERIFY,
        _ => EXIT_PARSE,
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
