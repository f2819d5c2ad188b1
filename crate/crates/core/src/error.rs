use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{message} at line {line}")]
    Parse { line: usize, message: String },

    #[error("empty input: no edges found")]
    EmptyInput,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected} nodes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("negative propensity {value} at ({i}, {j})")]
    NegativePropensity { i: usize, j: usize, value: f64 },

    #[error("outcome outside the ensemble support: {0}")]
    SupportViolation(String),

    #[error("propensities are not uniform; the unbiased formula needs an explicit override")]
    NotUniform,

    #[error("analytic expectation requires uniform propensities; estimate by sampling instead")]
    AnalyticUnavailable,

    #[error("degenerate propensity normalization")]
    DegenerateNormalization,

    #[error(
        "quadrature did not converge: relative error estimate {rel_error:e} after {panels} panels"
    )]
    NonConvergent { rel_error: f64, panels: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("remaining propensity mass is zero after {drawn} of {wanted} draws")]
    SamplingExhausted { drawn: u64, wanted: u64 },

    #[error("ensemble was not built from this graph's degree sequence")]
    EnsembleMismatch,
}
