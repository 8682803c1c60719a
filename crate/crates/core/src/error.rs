use thiserror::Error;

/// Errors raised by parsers, solvers and generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("discount factor {0} is not in (0,1)")]
    LambdaRange(String),
    #[error("vertex `{0}` is a sink")]
    Sink(String),
    #[error("Eve out-degree < 2 at vertex `{0}`")]
    EveOutDegree(String),
    #[error("duplicate edge `{0}` -> `{1}`")]
    DuplicateEdge(String, String),
    #[error("duplicate transition `{0}` --{1}--> `{2}`")]
    DuplicateTransition(String, String, String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("name `{0}` declared twice")]
    DuplicateName(String),
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("automaton is not total: no transition for ({state}, {symbol})")]
    NotTotal { state: String, symbol: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("node budget of {limit} exhausted at depth {depth}")]
    Budget { limit: u64, depth: usize },
}

impl Error {
    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    /// True for errors that come from malformed or invalid input files.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Precondition(_) | Error::Budget { .. })
    }
}
