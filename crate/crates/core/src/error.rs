//! Crate-wide error type.

use crate::waves::Model;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A scalar argument fell outside its mathematical domain.
    #[error("{name} = {value} out of domain ({need})")]
    Domain {
        name: &'static str,
        value: f64,
        need: &'static str,
    },

    /// A requested period lies outside the admissible range for the model.
    #[error("period T = {period} inadmissible for {model:?}: need {need}")]
    PeriodRange {
        model: Model,
        period: f64,
        need: String,
    },

    /// Bad grid size (odd, too small, ...).
    #[error("grid size n = {n} invalid: {need}")]
    GridSize { n: usize, need: &'static str },

    /// A linear solve hit a (near-)singular restricted operator.
    #[error("singular solve: {0}")]
    SingularSolve(String),

    /// The stability index is nonnegative, so no finite threshold speed exists.
    #[error("no threshold speed: stability index is nonnegative at kappa = {kappa}")]
    NoThreshold { kappa: f64 },

    /// A denominator the theory asserts positive came out nonpositive.
    #[error("positivity guard failed: {what} = {value} at kappa = {kappa}")]
    PositivityGuard {
        what: &'static str,
        value: f64,
        kappa: f64,
    },

    /// Mutually inconsistent parameters (e.g. mixed (kappa,w)/(T,c) pairs).
    #[error("inconsistent parameters: {0}")]
    Inconsistent(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
