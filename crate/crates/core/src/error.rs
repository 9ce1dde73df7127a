use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// `offset` is a 1-based character position in the input.
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("{0}")]
    Domain(String),

    #[error("{what} limit exceeded: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("netlist line {line}: {message}")]
    Netlist { line: usize, message: String },

    #[error("circuit: {0}")]
    Circuit(String),

    #[error("universe is not conjunction-closed: no member equivalent to `{0}`")]
    NotConjunctionClosed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn cap(what: &'static str, limit: usize, actual: usize) -> Self {
        Error::CapExceeded {
            what,
            limit,
            actual,
        }
    }
}
