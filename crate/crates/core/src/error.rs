use thiserror::Error;

/// Errors produced by the elimination toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("left division by the zero operator")]
    DivisionByZeroOperator,

    #[error("gcld of an all-zero operator family")]
    AllZeroOperators,

    #[error("co-order of the zero polynomial is undefined")]
    ZeroPolynomial,

    #[error("pseudo-remainder by the zero polynomial")]
    ZeroDivisor,

    #[error("homogeneous prolongation set is empty (N = 0)")]
    EmptyHomogeneousSet,

    #[error("perturbation changes the order profile of the system: {0}")]
    OrderEscalation(String),

    #[error("perturbed resultant is identically zero (tried: {0})")]
    ZeroResultant(String),

    #[error("polynomial is not representable over the system, residual {0}")]
    NonRepresentable(String),

    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("invalid input at line {line}: {msg}")]
    Semantic { line: usize, msg: String },

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("internal anomaly: {0}")]
    Anomaly(String),
}

impl Error {
    pub fn semantic(line: usize, msg: impl Into<String>) -> Self {
        Error::Semantic { line, msg: msg.into() }
    }

    pub fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { line, col, msg: msg.into() }
    }
}
