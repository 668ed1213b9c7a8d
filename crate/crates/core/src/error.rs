use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("probe controls are not affinely independent")]
    SingularProbeSystem,

    #[error("control grid is empty")]
    EmptyGrid,

    #[error("perturbation set is empty")]
    EmptyPerturbationSet,

    #[error("integration diverged at t = {t}")]
    Divergence { t: f64 },

    #[error("potential field is singular at the origin")]
    PotentialSingularity,

    #[error("scenario line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("scenario field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("unknown sweep parameter `{0}`")]
    UnknownParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(field: &str, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }
}
