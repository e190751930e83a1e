use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("grade {grade} at byte {pos} exceeds the maximum {max}")]
    GradeOverflow { pos: usize, grade: String, max: u32 },

    #[error("unbound metavariable `{0}`")]
    UnboundMetavariable(String),

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("grade {grade} exceeds the frame's maximum grade {max}")]
    GradeAboveFrame { grade: u32, max: u32 },

    #[error("enumeration of {needed} exceeds the budget of {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("relation is empty")]
    EmptyRelation,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid_model(msg: impl Into<String>) -> Self {
        Error::InvalidModel(msg.into())
    }

    pub(crate) fn budget(needed: impl ToString, budget: u64) -> Self {
        Error::BudgetExceeded { needed: needed.to_string(), budget }
    }
}
