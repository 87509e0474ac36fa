use thiserror::Error;

#[derive(Debug, Error)]
pub enum OpaError {
    #[error("zero polynomial: {0}")]
    ZeroPolynomial(&'static str),
    #[error("function vanishes at the origin")]
    VanishesAtOrigin,
    #[error("point lies outside the open bidisk")]
    OutsideBidisk,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("singular system")]
    Singular,
    #[error("constant polynomial has no roots")]
    ConstantPolynomial,
    #[error("degenerate slice: polynomial is identically zero on the slice")]
    DegenerateSlice,
    #[error("variable separation violated: {0}")]
    NotSeparated(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = OpaError> = std::result::Result<T, E>;
