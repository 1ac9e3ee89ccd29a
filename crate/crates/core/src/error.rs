use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed address: {0}")]
    MalformedAddress(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("point outside the space: {0}")]
    OutOfDomain(String),

    #[error("malformed gale: {0}")]
    MalformedGale(String),

    #[error("incompatible exponent: {0}")]
    IncompatibleExponent(String),

    #[error("not an antichain: {0} (pass the input through maximal_antichain first)")]
    NotAntichain(String),

    #[error("refinement impossible: {0}")]
    RefinementImpossible(String),

    #[error("gale failed validation: {0}")]
    Unvalidated(String),

    #[error("invalid set description: {0}")]
    InvalidSet(String),

    #[error("no estimate: {0}")]
    NoEstimate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
