use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters or an inconsistent configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The vector field produced a non-finite value.
    #[error("integration diverged at t = {t}")]
    Divergence { t: f64 },

    /// The adaptive controller wanted a step below the configured floor.
    #[error("step size {h:e} fell below the minimum step at t = {t}")]
    Stiffness { t: f64, h: f64 },

    /// A mutation operator exhausted its retry budget.
    #[error("no valid move: {0}")]
    NoValidMove(String),

    /// A proposal does not match the topology it is applied to.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// Syntax error in an input file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Well-formed input with invalid content.
    #[error("format error: {0}")]
    Format(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
