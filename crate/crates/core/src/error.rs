use thiserror::Error;

/// Crate-wide error type. Input rejection (parsing, malformed records,
/// catalog violations) is kept separate from verification *failure*, which is
/// reported through return values, never through `Err`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse `{text}` as {what}")]
    Parse { what: &'static str, text: String },

    #[error("denominator must be nonzero")]
    ZeroDenominator,

    #[error("multiplicity must be positive")]
    ZeroMultiplicity,

    #[error("{0}")]
    InvalidInput(String),

    #[error("unknown orbit id `{0}`")]
    UnknownOrbit(String),

    #[error("orbit catalog invalid: {0}")]
    InvalidCatalog(String),

    #[error("curve record invalid: {0}")]
    InvalidRecord(String),

    #[error("chain invalid: {0}")]
    InvalidChain(String),

    #[error("constants ledger inconsistent: {0}")]
    InvalidLedger(String),

    #[error("class-difference vector has dimension {got}, evaluators expect {want}")]
    DimensionMismatch { want: usize, got: usize },

    #[error("spectrum window too small: {0}")]
    WindowTooSmall(String),

    #[error("spectral gap condition fails: {0}")]
    GapViolation(String),

    #[error("integer quantity exceeds representable range: {0}")]
    Overflow(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
