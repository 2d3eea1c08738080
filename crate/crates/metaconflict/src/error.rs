use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the library.
///
/// Everything except [`Error::SizeLimit`] is an input-validation failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands are defined over different frames")]
    FrameMismatch,

    #[error("frame must have 1..={max} atoms, got {got}")]
    FrameSize { max: usize, got: usize },

    #[error("unknown atom label `{0}`")]
    UnknownAtom(String),

    #[error("input focal sets must be non-empty")]
    EmptyFocal,

    #[error("{what} index {index} out of range (n = {n})")]
    IndexRange {
        what: &'static str,
        index: usize,
        n: usize,
    },

    #[error("duplicate {what} `{which}`")]
    Duplicate { what: &'static str, which: String },

    #[error("{what} = {value} outside [0, 1]")]
    UnitRange { what: &'static str, value: f64 },

    #[error("{what} = {value} must be non-negative")]
    Negative { what: &'static str, value: f64 },

    #[error("masses sum to {got}, expected 1 within {tol}")]
    MassSum { got: f64, tol: f64 },

    #[error("{0} must be non-empty")]
    Empty(&'static str),

    #[error("{0}")]
    Invalid(String),

    #[error("{what} limited to {limit}, got {got}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },
}

impl Error {
    /// Distinguishes capacity caps from plain input errors (the CLI maps
    /// these to different exit codes).
    pub fn is_size_limit(&self) -> bool {
        matches!(self, Error::SizeLimit { .. })
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
