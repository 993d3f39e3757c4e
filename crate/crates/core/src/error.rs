use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the exact engine, the root finder and the CLI glue.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("q must satisfy 0 < q < 1, got {0}")]
    QOutOfRange(String),

    #[error("cannot parse rational {input:?}: {hint}")]
    ParseRational { input: String, hint: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series built over different q ({left} vs {right})")]
    ContextMismatch { left: String, right: String },

    #[error("series truncation orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },

    #[error("{what} is not invertible: leading coefficient is zero")]
    NonInvertible { what: String },

    #[error("cannot divide by t: constant coefficient is {0}, not zero")]
    Pole(String),

    #[error("index {n} exceeds the available order {order}")]
    OrderOutOfRange { n: usize, order: usize },

    #[error("unknown family {0:?} (expected bernoulli, euler, genocchi-det or genocchi-table)")]
    UnknownFamily(String),

    #[error("invalid determinant input: {0}")]
    Construction(String),

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("root iteration did not converge after {sweeps} sweeps (max update {last_update:e})")]
    NoConvergence {
        sweeps: usize,
        last_update: f64,
        best: Vec<Complex64>,
        residuals: Vec<f64>,
    },

    #[error("root classification failed: {0}")]
    Classification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
