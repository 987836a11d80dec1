use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("quantifier found where a quantifier-free formula is required")]
    QuantifierInDnfInput,
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error("input is not a conjunction of linear literals")]
    NotLinearized,
    #[error("sentence has free variables: {0:?}")]
    FreeVariables(Vec<String>),
    #[error("directions are Q-linearly dependent")]
    DependentDirections,
    #[error("empty or malformed interval: {0}")]
    EmptyBox(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("malformed theta: {0}")]
    MalformedTheta(String),
    #[error("missing assignment for {0}")]
    MissingAssignment(String),
    #[error("malformed session dump: {0}")]
    SessionFormat(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
