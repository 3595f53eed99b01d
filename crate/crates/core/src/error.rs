use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("accuracy check failed: {0}")]
    Accuracy(String),

    #[error("solver did not converge for lattice vector {xi:?}: {reason}")]
    SolverFailure { xi: Vec<i64>, reason: String },

    #[error("solver failed for {} lattice vectors (first: {:?})", .0.len(), .0.first())]
    SpectrumFailure(Vec<Vec<i64>>),

    #[error("pole at s = {0}")]
    Pole(f64),

    #[error("outside validated domain: {0}")]
    Domain(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("singular point {re}{im:+}i: {reason}")]
    Singularity { re: f64, im: f64, reason: String },

    #[error("scale limit exceeded: {0}")]
    Scale(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::DimensionMismatch { .. } | Error::InvalidBody(_) => 2,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Precondition(_) => "precondition",
            Error::InvalidBody(_) => "invalid_body",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Accuracy(_) => "accuracy",
            Error::SolverFailure { .. } | Error::SpectrumFailure(_) => "solver",
            Error::Pole(_) => "pole",
            Error::Domain(_) => "domain",
            Error::Range(_) => "range",
            Error::Singularity { .. } => "singularity",
            Error::Scale(_) => "scale",
            Error::Numeric(_) => "numeric",
            Error::Config { .. } => "config",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
