use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("homogeneous coordinates are all zero")]
    ZeroVector,
    #[error("degenerate join: the two points coincide")]
    DegenerateJoin,
    #[error("degenerate meet: the two lines coincide")]
    DegenerateMeet,
    #[error("singular transform: determinant is zero")]
    SingularTransform,
    #[error("point is not on the line")]
    NotOnLine,
    #[error("point coincides with the end point of the ratio")]
    RatioPole,
    #[error("point at infinity where an affine point is required")]
    PointAtInfinity,
    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),
    #[error("point set has no group labels")]
    MissingLabels,
    #[error("pattern references group {0}, which has no points")]
    MissingGroup(u8),
    #[error("point is not on the curve: {0}")]
    OffCurve(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("degenerate cantilever step at index {index}: {reason}")]
    DegenerateStep { index: usize, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("did not converge: {0}")]
    NonConvergence(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
