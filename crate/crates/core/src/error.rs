use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{freq_mhz} MHz is not inside any allocation; nearest is {nearest}")]
    OutOfBand { freq_mhz: f64, nearest: String },

    #[error("no MODCOD is feasible at {snr_db} dB; catalog floor is {floor_db} dB ({floor_name})")]
    NoFeasibleModcod {
        snr_db: f64,
        floor_db: f64,
        floor_name: String,
    },

    #[error("a uniform array of {elements} elements has no sidelobe")]
    NoSidelobe { elements: usize },

    #[error("unknown id {id:?}; valid ids: {}", valid.join(", "))]
    NotFound { id: String, valid: Vec<String> },

    #[error("invalid field {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or_default();
        Error::Parse {
            line,
            column: 0,
            message: e.to_string(),
        }
    }
}
