use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("{path}: line {row}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("subspace projection needs at least 2 dimensions, got {0}")]
    SubspaceDimension(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("k = {k} out of range: need 1 <= k <= {max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("unknown point id {0}")]
    UnknownPoint(usize),

    #[error("empty context set for point {0}")]
    EmptyContext(usize),

    #[error("labels must contain both classes")]
    SingleClass,

    #[error("labels contain no outliers")]
    NoOutliers,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid method tag `{tag}`: unknown token `{token}`")]
    MethodTag { tag: String, token: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
