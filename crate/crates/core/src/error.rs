use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A structured pairwise-independent family was asked for more indices
    /// than one block holds.
    #[error("{variant}: index {requested} exceeds block capacity {limit}")]
    Capacity {
        variant: &'static str,
        limit: u64,
        requested: u64,
    },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("index {index} outside 1..={limit}")]
    IndexOutOfRange { index: u64, limit: u64 },

    #[error("insufficient {source_name} block: need {needed} values, got {got}")]
    InsufficientSource {
        source_name: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("config error{}: {message}", location(.line, .field))]
    Config {
        line: Option<usize>,
        field: Option<String>,
        message: String,
    },

    #[error(
        "budget exceeded: horizon x replicas = {requested} > budget {budget}; \
         try replicas = {suggested_replicas} or horizon = {suggested_horizon}"
    )]
    Budget {
        requested: u128,
        budget: u128,
        suggested_replicas: u64,
        suggested_horizon: u64,
    },

    #[error("io error: {0}")]
    Io(String),
}

fn location(line: &Option<usize>, field: &Option<String>) -> String {
    match (line, field) {
        (Some(l), Some(f)) => format!(" (line {l}, field `{f}`)"),
        (Some(l), None) => format!(" (line {l})"),
        (None, Some(f)) => format!(" (field `{f}`)"),
        (None, None) => String::new(),
    }
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            line: None,
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
