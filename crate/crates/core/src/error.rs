use thiserror::Error;

/// Errors raised by grid construction, integration, analysis and export.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("corrupt state: {0}")]
    CorruptState(String),

    #[error("integration failed at step {step}: {reason}")]
    IntegrationFailure { step: usize, reason: String },

    #[error("spin direction undefined: zero amplitude")]
    UndefinedDirection,

    #[error("aperture window [{lo}, {hi}] does not overlap the grid")]
    ZeroPassage { lo: f64, hi: f64 },

    #[error("conditional state undefined: passage probability {0:e} below 1e-12")]
    UndefinedConditional(f64),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
