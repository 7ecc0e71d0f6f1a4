use std::path::PathBuf;

/// Errors raised by the solver library and the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum FracError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error(
        "fixed-point map is not a contraction: tau^alpha * B = {factor:.6} >= 1 \
         (reduce tau below {tau_max:.6e})"
    )]
    NonContraction { factor: f64, tau_max: f64 },

    #[error("fixed-point iteration did not converge at step {step} after {iters} iterations (increment {increment:.3e})")]
    FixedPoint { step: usize, iters: usize, increment: f64 },

    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<FracError>,
    },

    #[error("no plateau on the {side} side: only {found} qualifying nodes")]
    NoPlateau { side: &'static str, found: usize },

    #[error("grids are not nested: {0}")]
    NonNested(String),

    #[error("rate study needs at least 3 levels, got {0}")]
    InsufficientLevels(usize),

    #[error("invalid study: {0}")]
    InvalidStudy(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, FracError>;

impl FracError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        FracError::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        FracError::Io { path: path.into(), source }
    }
}
