use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix has odd dimension {0}, Pfaffian undefined")]
    OddDimension(usize),
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("denominator divisible by field characteristic")]
    BadReduction,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("field too small: need more than {needed} distinct scalars, have {have}")]
    FieldTooSmall { needed: u64, have: u64 },
    #[error("evaluations inconsistent with a homogeneous form of degree {degree}")]
    InconsistentEvaluations { degree: usize },
    #[error("entry is not homogeneous")]
    Inhomogeneous,
    #[error("skew normalization failed: {0}")]
    SkewNormalization(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exact division failed")]
    InexactDivision,
}

pub type Result<T> = std::result::Result<T, Error>;
