use thiserror::Error;

/// Errors raised by the numerical core and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input; `field` is a dotted path to the culprit.
    #[error("invalid input at `{field}`: {reason}")]
    Invalid { field: String, reason: String },

    #[error("non-finite value at {context}")]
    NonFinite { context: String },

    /// Intermediate overflow; usually |Im rho| is too large for direct evaluation.
    #[error("range error at rho = {re} + {im}i: {hint}")]
    Range { re: f64, im: f64, hint: String },

    #[error("quadrature did not converge after {refinements} refinements (estimate {estimate:e})")]
    Quadrature { refinements: usize, estimate: f64 },

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("zero of the function within {distance:e} of the contour |rho| = {radius} after {retries} retries")]
    NearContourZero {
        radius: f64,
        distance: f64,
        retries: usize,
    },

    #[error("contour sampling did not resolve the argument with {samples} points")]
    Sampling { samples: usize },

    #[error("function vanishes on the probe line Im rho = {h}; choose a larger h")]
    ZeroOnProbeLine { h: f64 },

    #[error("undefined ratio: {0}")]
    Undefined(String),

    #[error("sine-type condition violated: {0}")]
    NotSineType(String),

    #[error("integration step failure: {0}")]
    StepSize(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for failures caused by the inputs rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Invalid { .. } | Error::Json(_) | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
