use thiserror::Error;

/// Failures raised by the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RifError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("evaluation error: pole hit at z = {re}{im:+}i")]
    EvaluationError { re: f64, im: f64 },
    #[error("pole of modulus {modulus} inside the closed unit disk")]
    PoleInDisk { modulus: f64 },
    #[error("ill-conditioned winding: boundary modulus {min_modulus:e} (or phase step too large)")]
    IllConditionedWinding { min_modulus: f64 },
    #[error("not inner: {0}")]
    NotInner(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("trigonometric polynomial is not nonnegative: min eigenvalue {min_eigenvalue:e}")]
    NotNonnegative { min_eigenvalue: f64 },
    #[error("convergence failure{context}: residual {residual:e}")]
    ConvergenceFailure { residual: f64, context: String },
    #[error("deflation failure at zero {re}{im:+}i: remainder {residual:e}")]
    DeflationFailure { re: f64, im: f64, residual: f64 },
    #[error("no kernel: smallest singular value {sigma:e} exceeds tolerance")]
    NoKernel { sigma: f64 },
    #[error("no spare row: m = {m}, n = {n} (square and wide inputs are not path connected to (I; 0))")]
    NoSpareRow { m: usize, n: usize },
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<RifError>,
    },
}

impl RifError {
    pub fn context(self, context: impl Into<String>) -> Self {
        RifError::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Strips any context wrappers.
    pub fn root(&self) -> &RifError {
        match self {
            RifError::Context { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, RifError>;
