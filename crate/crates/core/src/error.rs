use thiserror::Error;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate basis: the two vectors are linearly dependent")]
    DegenerateBasis,
    #[error("the zero element has no factorization")]
    ZeroElement,
    #[error("unsupported discriminant {0}; expected one of -3, -4, -7, -8, -11, -19, -43, -67, -163")]
    UnsupportedDiscriminant(i64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("prime bound {bound} is below the largest relevant prime {needed}")]
    BoundTooSmall { bound: u64, needed: u64 },
    #[error("euler_phi weights need an ideal of an imaginary quadratic ring as source")]
    WeightMismatch,
    #[error("window size {window} exceeds pi*psi(N) = {limit}")]
    WindowTooLarge { window: f64, limit: f64 },
    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
