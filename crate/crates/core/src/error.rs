use std::fmt;

use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("nonlinear resonance: Ω² = Δ² with γ_ab = 0 makes χ⁽³⁾ singular")]
    NonlinearResonance,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("regime mismatch: {0}")]
    Regime(String),

    #[error("singular: {0}")]
    Singular(String),

    #[error("integration failed at step {step} (t = {t:e} s): {reason}")]
    Integration { step: u64, t: f64, reason: String },

    #[error("{0}")]
    Config(ConfigError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A scenario-file problem, located by key and (when known) line.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config error at line {line}, key `{}`: {}", self.key, self.message),
            None => write!(f, "config error, key `{}`: {}", self.key, self.message),
        }
    }
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Config(ConfigError {
            key: key.into(),
            line,
            message: message.into(),
        })
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    /// True for errors that come from the time integrator rather than from
    /// validating inputs.
    pub fn is_integration(&self) -> bool {
        matches!(self, Error::Integration { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
