use thiserror::Error;

/// Crate-wide error type.  The CLI maps the variants to exit codes:
/// invalid input and on-wall vectors exit 2, verification failures exit 3,
/// resource guards exit 4.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Structured rejection of a parameter vector lying on a wall.  The
    /// wall is named with 1-based end labels, e.g. `W{1,3}`.
    #[error("parameter vector lies on wall {wall}")]
    OnWall { wall: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two chambers passed to a wall-crossing operation are not adjacent
    /// across the requested wall only; lists every disagreeing wall.
    #[error("chambers are not adjacent across {wall}: sign disagreements at {disagreements:?}")]
    NotAdjacent {
        wall: String,
        disagreements: Vec<String>,
    },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("resource guard exceeded: {0}")]
    Resource(String),

    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code class for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OnWall { .. } | Error::InvalidArgument(_) | Error::NotAdjacent { .. } => 2,
            Error::Degenerate(_) => 2,
            Error::Verification(_) => 3,
            Error::Resource(_) => 4,
        }
    }
}
