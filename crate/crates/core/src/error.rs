use thiserror::Error;

use crate::ring::RingError;

/// Errors raised by the exterior, calculus and algebroid layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree {degree} exceeds chart dimension {dimension}")]
    DegreeOverflow { degree: usize, dimension: usize },
    #[error("invalid multi-index {indices:?} for dimension {dimension}")]
    InvalidMultiIndex {
        indices: Vec<usize>,
        dimension: usize,
    },
    #[error("expected {expected} arguments, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("invalid Nambu structure: {0}")]
    InvalidStructure(String),
    /// The bracket residual `[[a, f Y]] - f [[a, Y]]` is not one scalar
    /// multiple of the probe `Y`.
    #[error("anchor extraction failed for f = {function} on probe {probe}, component {component}: {reason}")]
    ExtractionFailure {
        function: String,
        probe: String,
        component: String,
        reason: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
