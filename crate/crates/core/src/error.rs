use thiserror::Error;

pub type Result<T, E = AoiError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum AoiError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse distribution spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("degenerate regime: {0}")]
    Degenerate(String),

    /// Two independent computations of the same quantity disagree.
    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("no data: {0}")]
    NoData(String),

    /// The simulator was driven into an impossible state. Always a bug.
    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
