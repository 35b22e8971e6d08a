use thiserror::Error;

/// Errors produced across the solver pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the model is defined.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// Geometry, mesh or run configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical routine failed (factorization, convergence, degenerate mode).
    #[error("numerical failure in {module}::{op}: {msg}")]
    Numerical {
        module: &'static str,
        op: &'static str,
        msg: String,
    },

    /// A phase-matching root does not exist inside the requested bracket.
    #[error("process is not phase-matchable in [{lo_nm:.3}, {hi_nm:.3}] nm")]
    NotPhaseMatchable { lo_nm: f64, hi_nm: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    pub(crate) fn numerical(module: &'static str, op: &'static str, msg: impl Into<String>) -> Self {
        Error::Numerical {
            module,
            op,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
