use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field specification: {0}")]
    InvalidSpec(String),
    #[error("insufficient precision: need {needed} pi-digits, have {have}")]
    InsufficientPrecision { needed: u32, have: u32 },
    #[error("division by pi is not exact (digit 0 is nonzero)")]
    DivisionNotExact,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("element does not lie in the unramified base field")]
    NotInBaseField,
    #[error("map is not a group automorphism")]
    NotAnAutomorphism,
    #[error("Frobenius element does not normalize the subgroup")]
    NotNormalized,
    #[error("linearized system is singular: {0}")]
    SingularLinearization(String),
    #[error("operation requires an abelian Weil monoid")]
    NotAbelian,
    #[error("secondary metric is not conformal to the primary one mod pi^2")]
    NotConformal,
    #[error("metric has a non-unit diagonal entry")]
    NonUnitDiagonal,
    #[error("metric is not diagonal")]
    NonDiagonal,
    #[error("no square root exists")]
    NoSquareRoot,
    #[error("constraint unsatisfiable after {0} draws")]
    ConstraintUnsatisfiable(u32),
    #[error("no witness found within the search bound")]
    NotFoundWithinBound,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("scenario error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
