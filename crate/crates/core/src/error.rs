use thiserror::Error;

use crate::parser_io::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid field: {0}")]
    Field(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("point does not lie on the hypersurface (F(x) = {0})")]
    NotOnHypersurface(String),

    #[error("singular point: the gradient of F vanishes at x")]
    SingularPoint,

    #[error("degenerate quadric: rank {rank} < {n}")]
    DegenerateQuadric { rank: usize, n: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid spec file: {0}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for malformed input, 3 for mathematical
    /// precondition failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Spec(_) | Error::Json(_) | Error::Field(_) => 2,
            Error::NotOnHypersurface(_)
            | Error::SingularPoint
            | Error::DegenerateQuadric { .. }
            | Error::Precondition(_)
            | Error::Shape(_) => 3,
            Error::Io(_) => 1,
        }
    }
}
