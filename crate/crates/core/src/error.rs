use thiserror::Error;

/// Errors raised by instance construction, the query structures and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input contains no points")]
    EmptyInput,
    #[error("point {index} has invalid weight {weight} (must be positive and finite)")]
    InvalidWeight { index: usize, weight: f64 },
    #[error("point {index} has non-finite coordinate {value}")]
    InvalidCoordinate { index: usize, value: f64 },
    #[error("half-plane {index} has slope {slope} of the wrong sign")]
    SignMismatch { index: usize, slope: f64 },
    #[error("half-plane {index} has zero slope")]
    ZeroSlope { index: usize },
    #[error("x-intercepts decrease at half-plane {index}")]
    NotInterceptOrdered { index: usize },
    #[error("range ({i}, {j}) is invalid for a sequence of length {len}")]
    IndexOutOfRange { i: usize, j: usize, len: usize },
    #[error("direction vector is zero")]
    DegenerateDirection,
    #[error("range ({i}, {j}) has half-planes of a single slope sign; no finite lowest point")]
    UnboundedBelow { i: usize, j: usize },
    #[error("crossing needs at least one hull on each side")]
    EmptySide,
    #[error("k must be at least 1 (got {0})")]
    InvalidK(usize),
    #[error("y-coordinates decrease at point {index}")]
    NotMonotone { index: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
