use thiserror::Error;

/// Errors raised anywhere in the geometry and spectrum pipeline.
///
/// Payloads are stored as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite field value at {point:?}")]
    NonFiniteEvaluation { point: Vec<f64> },

    #[error("wedge of degrees {p} and {q} exceeds chart dimension {dim}")]
    DegreeOverflow { p: usize, q: usize, dim: usize },

    #[error("no quadrature node lies inside the integration region")]
    EmptyDomain,

    #[error("quadrature did not converge: value {value}, error estimate {err:e} > {tol:e}")]
    NoConvergence { value: f64, err: f64, tol: f64 },

    #[error("degenerate metric at {point:?}: {reason}")]
    DegenerateMetric { point: Vec<f64>, reason: String },

    #[error("connection has a single chart; no transition function to verify")]
    MissingTransition,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("potential stays below the energy along the whole ray")]
    NoTurningPoint,

    #[error("characteristic class needs a chart of dimension >= {required}, got {dim}")]
    DimensionTooLow { dim: usize, required: usize },

    #[error("unknown structure group `{0}`")]
    UnknownGroup(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    /// Stable short name used in reports and CSV flag columns.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFiniteEvaluation { .. } => "NonFiniteEvaluation",
            Error::DegreeOverflow { .. } => "DegreeOverflow",
            Error::EmptyDomain => "EmptyDomain",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DegenerateMetric { .. } => "DegenerateMetric",
            Error::MissingTransition => "MissingTransition",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NoTurningPoint => "NoTurningPoint",
            Error::DimensionTooLow { .. } => "DimensionTooLow",
            Error::UnknownGroup(_) => "UnknownGroup",
            Error::DimensionMismatch(_) => "DimensionMismatch",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
