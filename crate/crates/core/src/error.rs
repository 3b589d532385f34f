use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sign could not be certified up to {bits} bits of precision")]
    AmbiguousSign { bits: u32 },
    #[error("points are identical")]
    IdenticalPoints,
    #[error("lines are identical")]
    IdenticalLines,
    #[error("all homogeneous coordinates are zero")]
    ZeroTriple,
    #[error("transform is singular")]
    SingularTransform,
    #[error("all points are collinear; the dual arrangement is a pencil")]
    DegeneratePencil,
    #[error("arrangement would have {vertices} vertices; pass force to build anyway")]
    ArrangementTooLarge { vertices: usize },
    #[error("input must have exact rational coordinates")]
    NonRationalInput,
    #[error("the nine intersection points are not distinct")]
    DegenerateNinePoints,
    #[error("point is not on the curve")]
    OffCurve,
    #[error("point is the singular point of the curve")]
    SingularPoint,
    #[error("value outside the domain: {0}")]
    DomainError(String),
    #[error("unsupported normal form: {0}")]
    UnnormalizedInput(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError { line: usize, column: usize, message: String },
    #[error("group of order {0} exceeds the exhaustive-search limit")]
    GroupTooLarge(u64),
    #[error("the three lines are concurrent")]
    ConcurrentLines,
    #[error("point is not on the base line")]
    OffLine,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
