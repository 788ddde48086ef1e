use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of an operation (negative probabilities,
    /// states off the constraint manifold, unsolvable energies, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input: mismatched sizes, bad indices, empty
    /// selections.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not symmetric (max |H - H^T| = {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    /// The integrator could not meet its tolerance or produced a
    /// non-finite state.
    #[error("integration failed at t = {time}: {reason}")]
    Integration { time: f64, reason: String },

    #[error("trajectory undersampled: phi32 jumps by {jump:.3} rad between t = {t0} and t = {t1}")]
    Undersampled { t0: f64, t1: f64, jump: f64 },

    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of the numerical machinery as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Eigensolver(_) | Error::Integration { .. } | Error::NotSymmetric { .. }
        )
    }
}
