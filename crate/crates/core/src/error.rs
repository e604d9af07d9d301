use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("law is not symmetric about its centre")]
    NotSymmetric,
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("scale outside [sigma0, sigma]: {0}")]
    TauOutOfRange(String),
    #[error("factorization failed: {0}")]
    FactorizationFailed(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
