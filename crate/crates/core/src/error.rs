use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("exact comparison needs at most two generators, got {arity}")]
    UnsupportedMode { arity: usize },

    #[error("pole: factor 1 - x q^-{index} vanishes identically")]
    Pole { index: i64 },

    #[error("argument has z-degree zero")]
    NonAdmissible,

    #[error("variable count mismatch: {left} vs {right}")]
    Arity { left: usize, right: usize },

    #[error("{0}")]
    Domain(String),

    #[error("size bound exceeded: {0}")]
    Bound(String),

    #[error("ideal/dimension bijection violated: {0}")]
    Bijection(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no usable evaluation point after {0} attempts")]
    Degenerate(usize),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
