use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("variable capture: `{0}` already occurs in the formula")]
    Capture(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("alphabet mismatch: width {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    /// A configured resource cap was exceeded.
    #[error("resource limit exceeded in {stage}: {detail} (cap {cap})")]
    Resource {
        stage: String,
        detail: String,
        cap: usize,
    },
    /// A brute-force cost guard rejected the request.
    #[error("budget exceeded in {stage}: {detail}")]
    Budget { stage: String, detail: String },
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("condition ({0}) fails: {1}")]
    Condition(char, String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn budget(stage: &str, detail: impl Into<String>) -> Self {
        Error::Budget {
            stage: stage.to_string(),
            detail: detail.into(),
        }
    }

    /// True for the resource and budget categories (CLI exit code 3).
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::Resource { .. } | Error::Budget { .. } | Error::Exhausted(_)
        )
    }
}
