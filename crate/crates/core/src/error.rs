use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no 4-grams available")]
    NoNgrams,

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    Asymmetric(f64),

    #[error("ill-conditioned regularized system")]
    IllConditioned,

    #[error("degenerate labeled set: {0}")]
    DegenerateLabels(String),

    #[error("degenerate fold {fold}: training labels lack a class")]
    DegenerateFold { fold: usize },

    #[error("dual solver did not converge after {iterations} iterations (kkt violation {kkt_violation:e})")]
    NotConverged {
        iterations: usize,
        kkt_violation: f64,
        best: Vec<f64>,
    },

    #[error("linear system residual {residual:e} exceeds bound {bound:e}")]
    Residual { residual: f64, bound: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported model version {0:?}")]
    UnsupportedVersion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
