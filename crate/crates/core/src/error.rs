use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("unknown request {0}")]
    UnknownRequest(String),
    #[error("{what}: {count} requests exceed the guard of {guard}")]
    GuardExceeded {
        what: &'static str,
        count: usize,
        guard: usize,
    },
    #[error("the tree solver requires a tree metric")]
    NotATree,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
