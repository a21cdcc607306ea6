use thiserror::Error;

/// Errors raised while building, parsing or analysing pairwise comparison matrices.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonSquare: expected {expected} entries in row {row}, found {found}")]
    NonSquare {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("TooSmall: a comparison matrix needs at least 2 objects, got {0}")]
    TooSmall(usize),
    #[error("NonPositiveEntry({0},{1}): entries must be positive and finite")]
    NonPositiveEntry(usize, usize),
    #[error("ReciprocityViolation({0},{1}): a_ij * a_ji differs from 1")]
    ReciprocityViolation(usize, usize),
    #[error("UnitDiagonalViolation({0}): diagonal entry is not 1")]
    UnitDiagonalViolation(usize),
    #[error("NonPositiveWeight({0}): weights must be positive and finite")]
    NonPositiveWeight(usize),
    #[error("InvalidWeights: {0}")]
    InvalidWeights(String),
    #[error("NoConvergence: power iteration did not settle after {0} iterations")]
    NoConvergence(usize),
    #[error("InvalidLambda: lambda_max {lambda} is below n = {n}")]
    InvalidLambda { lambda: f64, n: usize },
    #[error("LengthMismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("TiesPresent: ranking contains tied weights")]
    TiesPresent,
    #[error("InvalidKI: {0} is outside [0, 1)")]
    InvalidKi(f64),
    #[error("DegenerateGap: weight gap {0} must be positive")]
    DegenerateGap(f64),
    #[error("KOutOfRange: k = {k} exceeds C({n},2)")]
    KOutOfRange { n: usize, k: usize },
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("Parse: line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// Stable variant name, used by the CLI on standard error.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::TooSmall(_) => "TooSmall",
            Error::NonPositiveEntry(..) => "NonPositiveEntry",
            Error::ReciprocityViolation(..) => "ReciprocityViolation",
            Error::UnitDiagonalViolation(_) => "UnitDiagonalViolation",
            Error::NonPositiveWeight(_) => "NonPositiveWeight",
            Error::InvalidWeights(_) => "InvalidWeights",
            Error::NoConvergence(_) => "NoConvergence",
            Error::InvalidLambda { .. } => "InvalidLambda",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::TiesPresent => "TiesPresent",
            Error::InvalidKi(_) => "InvalidKI",
            Error::DegenerateGap(_) => "DegenerateGap",
            Error::KOutOfRange { .. } => "KOutOfRange",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Parse { .. } => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
