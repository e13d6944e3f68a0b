use thiserror::Error;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error(
        "non-manifold input: {0}; a perfect delta-simplification may not exist \
         on a non-manifold 2-dimensional cell complex"
    )]
    NonManifold(String),

    #[error("internal invariant violation: {0}")]
    Internal(plateau::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit codes: 2 parse failure, 3 non-manifold input, 4 internal
    /// invariant violation, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::NonManifold(_) => 3,
            CliError::Internal(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<plateau::Error> for CliError {
    fn from(e: plateau::Error) -> Self {
        use plateau::Error::*;
        match e {
            NonManifoldEdge(..) | NotClosedSurface { .. } => CliError::NonManifold(e.to_string()),
            DegenerateTriangle(..) | SizeOverflow | InvalidComplex(_) | InvalidBoundary(_)
            | MissingVertexValue(_) | MissingCellValue(_) => CliError::Parse(e.to_string()),
            _ => CliError::Internal(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
