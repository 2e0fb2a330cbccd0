use thiserror::Error;

/// Errors produced by the samplers, estimators and quadrature routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("at least two base stations are required to form interference (got N = {0})")]
    NoInterferer(usize),

    #[error("propagation-effect distribution violates the Laplace decay condition: {0}")]
    ConditionViolated(String),

    #[error("model {0} is not supported by this operation")]
    UnsupportedModel(String),

    #[error("sampler stalled after {proposals} proposals while placing point {placed} of {target}")]
    SamplerStall {
        proposals: u64,
        placed: usize,
        target: usize,
    },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
