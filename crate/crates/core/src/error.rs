use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operands live in different variable spaces.
    #[error("variable space mismatch: {left} vs {right}")]
    VarSpaceMismatch { left: String, right: String },

    /// Operands use different coefficient backends (or float precisions).
    #[error("backend mismatch: {left} vs {right}")]
    BackendMismatch { left: String, right: String },

    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    /// A D-table entry with p > q is nonzero, so no A-table maps onto it.
    #[error("triangularity violated at (p, q) = ({p}, {q})")]
    Triangularity { p: u32, q: u32 },

    #[error("invalid set descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An iterative solver ran out of its iteration budget.
    #[error("solver did not converge: {0}")]
    NonConvergence(String),
}

impl Error {
    /// True for failures of an inner numerical solve rather than bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Error::NonConvergence(_))
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
