use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("empty subshift: {0}")]
    EmptySubshift(String),

    /// The system has finitely many points, so γ is a supremum over no data.
    #[error("degenerate system: {0}")]
    Degenerate(String),

    #[error("witness rejected: {0}")]
    WitnessRejected(String),

    #[error("bracket violation at N = {n}: m_lower = {lower} > m_upper = {upper}")]
    BracketViolation { n: usize, lower: usize, upper: usize },

    #[error("unsupported presentation: {0}")]
    Unsupported(String),

    /// The input is valid but outside what the requested report is meaningful for.
    #[error("refused: {0}")]
    Refused(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
