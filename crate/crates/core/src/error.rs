use thiserror::Error;

/// Errors raised by the exact-arithmetic layers and the verifiers built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coefficient error: {0}")]
    Coefficient(String),
    #[error("normalization error: {0}")]
    Normalization(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("input is not invariant: {0}")]
    Invariance(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
