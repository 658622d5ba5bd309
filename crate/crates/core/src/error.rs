use thiserror::Error;

/// Errors produced by samplers, evaluators and estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "covariance matrix is not positive definite: leading minor {minor} failed \
         after {escalations} jitter escalations"
    )]
    Factorization { minor: usize, escalations: usize },

    #[error("quadrature did not converge: achieved relative error {achieved:.3e}, requested {requested:.1e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("rejection sampler exceeded {cap} proposals for one increment; use a smaller increment step")]
    RejectionCap { cap: u64 },

    #[error("path {index}: {source}")]
    Path {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("estimation error: {0}")]
    Estimation(String),

    #[error("power-law fit error: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
