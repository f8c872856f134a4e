use thiserror::Error;

/// Errors raised by the constitutive, measure, wave and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid constitutive law: {0}")]
    InvalidLaw(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid shock: {0}")]
    InvalidShock(String),

    #[error("quadrature did not converge: partial = {partial:e}, error estimate = {estimate:e}")]
    Quadrature { partial: f64, estimate: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not a collapse: velocity jump {0} must be negative")]
    NotACollapse(f64),

    #[error("query at interaction time t = {0}")]
    EventTime(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("time {t} outside solution validity [{lo}, {hi}]")]
    OutOfTime { t: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
