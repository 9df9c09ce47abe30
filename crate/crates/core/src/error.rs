use thiserror::Error;

/// Errors raised by the exact and numeric pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("conductor too large: {conductor} exceeds cap {cap}")]
    ConductorTooLarge { conductor: u64, cap: u32 },

    #[error("group too large or infinite (closure exceeded {bound} elements)")]
    GroupTooLarge { bound: usize },

    #[error("character certification failed: {0}")]
    CharacterCertification(String),

    #[error("isotypic projection failed: {0}")]
    IsotypicProjection(String),

    #[error("not a 2-cocycle: {0}")]
    NotACocycle(String),

    #[error("invalid section/group data: {0}")]
    InvalidSection(String),

    #[error("rank uncertain: singular value {value:e} inside the ambiguity band")]
    RankUncertain { value: f64 },

    #[error("value is not rational: {0}")]
    NotRational(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension bound exceeded: {size} > {bound}")]
    TooLarge { size: usize, bound: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
