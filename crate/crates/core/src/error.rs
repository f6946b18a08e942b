use thiserror::Error;

/// Errors produced by the placement, cost, solver and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown intersection id {0}")]
    UnknownIntersection(usize),

    #[error("no path between intersections {from} and {to}")]
    NoPath { from: usize, to: usize },

    #[error("network has no intersections")]
    EmptyNetwork,

    #[error("exhaustive search over N={n}, MZ={mz} exceeds the enumeration budget (N <= {max_n}, MZ <= {max_mz})")]
    Oversize {
        n: usize,
        mz: usize,
        max_n: usize,
        max_mz: usize,
    },

    #[error("path exponent {0} is not supported by the optimal allocator (requires alpha > 1)")]
    UnsupportedExponent(f64),

    #[error("evaluation point coincides with data point {0}; use the vertex test instead")]
    CoincidentVertex(usize),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
