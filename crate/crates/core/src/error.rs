use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A density or parameter map was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("covariance is not positive semi-definite: |c12|^2 = {c12_sq} > v11*v22 = {prod}")]
    NotPsd { c12_sq: f64, prod: f64 },

    #[error("vanishing denominator in RTF map")]
    VanishingDenominator,

    #[error("every bin is missing; nothing to estimate")]
    AllMissing,

    #[error("value {value} out of range: {what}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("input too short: {len} samples, need at least {needed}")]
    TooShort { len: usize, needed: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("wav: {0}")]
    Wav(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn shape(expected: impl ToString, found: impl ToString) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
