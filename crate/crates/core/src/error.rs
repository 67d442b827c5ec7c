use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dangling reference to `{id}`")]
    DanglingReference { id: String },

    #[error("duplicate id `{id}`")]
    DuplicateId { id: String },

    #[error("cyclic topic parentage: {}", cycle.join(" -> "))]
    TopicCycle { cycle: Vec<String> },

    #[error("{what} `{id}` not found")]
    NotFound { what: &'static str, id: String },

    #[error("unknown topic `{0}`")]
    UnknownTopic(String),

    #[error("invalid record: {0}")]
    InvalidRecord(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid state: {0}")]
    State(String),

    #[error("term vectors come from different dictionaries")]
    DictionaryMismatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse error class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Argument,
    Data,
    State,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Argument(_) => ErrorClass::Argument,
            Error::State(_) => ErrorClass::State,
            _ => ErrorClass::Data,
        }
    }

    pub(crate) fn not_found(what: &'static str, id: impl Into<String>) -> Self {
        Error::NotFound { what, id: id.into() }
    }
}
