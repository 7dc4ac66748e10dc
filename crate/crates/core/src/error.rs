use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("evaluation at z = 0 of a function with negative powers")]
    ZeroBaseWithNegativePowers,
    #[error("support of {what} is not contained in the {space} subspace")]
    WrongSubspace {
        what: &'static str,
        space: &'static str,
    },
    #[error("moment window {window} is smaller than the support span {span}")]
    WindowTooSmall { window: usize, span: usize },
    #[error("point {point} lies outside the annulus r < |z| < 1 (r = {r})")]
    PointOutsideAnnulus { point: String, r: f64 },
    #[error("point {point} lies outside the domain of the {kernel} kernel")]
    PointOutsideDomain { kernel: &'static str, point: String },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero function has no factorization")]
    ZeroFunction,
    #[error("trigonometric polynomial is negative somewhere on the circle (min {0:e})")]
    NotNonnegative(f64),
    #[error("multiplier is unbounded on the closed annulus: {0}")]
    UnboundedMultiplier(String),
    #[error("embedding of a point requires z != 0")]
    ZeroPoint,
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
