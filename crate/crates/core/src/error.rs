//! Crate-wide error type.
//!
//! Variants split into two broad families: configuration errors (a requested
//! recovery is not admissible or a parameter is out of range) and input-data
//! errors (malformed files, non-finite values, aliasing). The CLI maps the
//! families to distinct exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation point {t} lies outside [-1, 1]")]
    DomainPoint { t: f64 },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("smoothness parameter out of range: {what}")]
    InvalidClass { what: String },

    #[error("recovery not admissible: requires {requirement}, got mu = {mu}")]
    Inadmissible { requirement: String, mu: f64 },

    #[error("invalid recovery plan: {what}")]
    InvalidPlan { what: String },

    #[error("noise level delta must lie in (0, 1), got {delta}")]
    InvalidDelta { delta: f64 },

    #[error("coefficient index {m} exceeds quadrature resolution n = {n}; raise n to avoid aliasing")]
    Aliasing { m: usize, n: usize },

    #[error("quadrature search exhausted: no n <= {cap} meets the target accuracy")]
    QuadratureBudget { cap: usize },

    #[error("{path}:{line}: {what}")]
    Parse {
        path: String,
        line: usize,
        what: String,
    },

    #[error("invalid input data: {what}")]
    InvalidInput { what: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors caused by bad configuration (parameters, admissibility)
    /// rather than by the data being read.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidClass { .. }
                | Error::Inadmissible { .. }
                | Error::InvalidPlan { .. }
                | Error::InvalidDelta { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
