use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("operation `{op}` expects {expected} arguments, got {found}")]
    Arity { op: String, expected: usize, found: usize },

    #[error("variable `{0}` is not bound in the current context")]
    UnboundVariable(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("sort mismatch: {0}")]
    SortMismatch(String),

    #[error("malformed table for `{op}` at index {index}: {msg}")]
    MalformedTable { op: String, index: usize, msg: String },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("constant name collision: `{0}` already declared")]
    ConstantCollision(String),

    #[error("algebra `{0}` has no adjoined element constants")]
    ConstantsMissing(String),

    #[error("{what} limit exceeded: {size} > {limit}")]
    LimitExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("incomparable carriers: {0} vs {1}")]
    IncomparableCarriers(usize, usize),

    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { pos, msg: msg.into() }
    }

    /// Process exit status used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::LimitExceeded { .. } => 2,
            _ => 1,
        }
    }
}
