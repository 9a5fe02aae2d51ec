use thiserror::Error;

/// Errors raised by catalog lookups and the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("position {x} lies outside the open domain ({lo}, {hi})")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("level n={n} requested but the spectrum holds only {count} bound states")]
    SpectrumExhausted { n: usize, count: usize },

    #[error("energy {energy} outside the counting-function range: {reason}")]
    Range { energy: f64, reason: String },

    #[error("Barclay classification inconsistent at x={x}: A + B W^2 = {radicand} < 0")]
    Classification { x: f64, radicand: f64 },

    #[error("no classical motion: energy {energy} is below the curve minimum {minimum}")]
    NoClassicalMotion { energy: f64, minimum: f64 },

    #[error("numerical failure: {message}")]
    Numeric {
        message: String,
        best_estimate: Option<f64>,
    },

    #[error("series did not converge after {terms} terms (partial sum {partial_sum}, tail bound {tail_bound})")]
    Convergence {
        partial_sum: f64,
        tail_bound: f64,
        terms: usize,
    },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("box truncation: level {level} moved by {shift} when the box was doubled")]
    Truncation { level: usize, shift: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn numeric(message: impl Into<String>, best_estimate: Option<f64>) -> Self {
        Error::Numeric {
            message: message.into(),
            best_estimate,
        }
    }
}
