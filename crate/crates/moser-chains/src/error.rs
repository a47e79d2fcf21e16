use thiserror::Error;

/// Errors raised by the library. Each variant belongs to one of three
/// families (input parsing, mathematical precondition, internal invariant)
/// which the command line maps to distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("insufficient order: {0}")]
    InsufficientOrder(String),
    #[error("non-invertible: {0}")]
    NonInvertible(String),
    #[error("constant term: {0}")]
    ConstantTerm(String),
    #[error("Levi degenerate: {0}")]
    LeviDegenerate(String),
    #[error("point not on hypersurface: {0}")]
    NotOnHypersurface(String),
    #[error("non-transversal curve: {0}")]
    NonTransversal(String),
    #[error("jet leaves transversal chart: {0}")]
    LeavesChart(String),
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Internal(_) => 4,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::InsufficientOrder(_) => "insufficient_order",
            Error::NonInvertible(_) => "non_invertible",
            Error::ConstantTerm(_) => "constant_term",
            Error::LeviDegenerate(_) => "levi_degenerate",
            Error::NotOnHypersurface(_) => "not_on_hypersurface",
            Error::NonTransversal(_) => "non_transversal",
            Error::LeavesChart(_) => "leaves_chart",
            Error::Precondition(_) => "precondition",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
