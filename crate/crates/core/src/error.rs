use thiserror::Error;

/// Errors raised by the geometry, sampling and estimation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {got}: expected {expected}")]
    InvalidDimension { got: usize, expected: &'static str },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("line is within tangency tolerance of the boundary")]
    Tangent,

    #[error("point has no unique boundary projection (distance {distance:.3e}, limit {limit:.3e})")]
    NoUniqueProjection { distance: f64, limit: f64 },

    #[error("point lies outside the shape")]
    OutsideShape,

    #[error("not enough points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("line counter failed on direction {direction}, line {line} (seed {seed}): {source}")]
    Counter {
        direction: usize,
        line: usize,
        seed: u64,
        theta: Vec<f64>,
        offset: Vec<f64>,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
