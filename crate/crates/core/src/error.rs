use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {order} exceeds the ceiling {ceiling}")]
    FieldTooLarge { order: u64, ceiling: u64 },
    #[error("modulus is not irreducible")]
    ReducibleModulus,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("element {value} does not belong to a field of order {order}")]
    ForeignElement { value: u32, order: u32 },
    #[error("parse error: {0}")]
    Parse(String),

    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("points coincide")]
    EqualPoints,
    #[error("planes coincide")]
    EqualPlanes,
    #[error("point lies on the line")]
    PointOnLine,
    #[error("rows do not span a line (rank {0})")]
    NotALine(usize),
    #[error("lines are not skew")]
    NotSkew,
    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not Hermitian: entry ({0},{1}) is not the conjugate of entry ({1},{0})")]
    NotHermitian(usize, usize),
    #[error("the zero matrix does not define a Hermitian variety")]
    ZeroMatrix,
    #[error("rank must be between 1 and 4, got {0}")]
    RankOutOfRange(usize),
    #[error("operation requires a non-degenerate surface (rank {0})")]
    Degenerate(usize),
    #[error("point is not on the surface")]
    PointNotOnSurface,

    #[error("the zero form is not allowed here")]
    ZeroForm,
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("line is not contained in the surface of the form")]
    LineNotOnForm,
    #[error("form does not have degree {expected} (got {got})")]
    WrongDegree { expected: u32, got: u32 },
    #[error("operation requires {0} characteristic")]
    WrongCharacteristic(&'static str),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("construction failed: {0}")]
    Construction(String),
    /// A consistency check that a theorem guarantees did not hold.
    #[error("consistency failure: {0}")]
    Consistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
