use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative entry at index {0}")]
    NegativeEntry(usize),

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("input sums to zero, cannot normalize")]
    ZeroMass,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    /// Direct-kernel Sinkhorn only: an entire kernel row underflowed to zero,
    /// which means the stabilized log-domain mode is required at this epsilon.
    #[error("kernel row {0} underflowed to zero, use the stabilized mode")]
    NumericalUnderflow(usize),

    #[error("sinkhorn did not converge: {iterations} iterations, marginal error {marginal_error:.3e}")]
    NotConverged {
        iterations: usize,
        marginal_error: f64,
    },

    #[error("empty support")]
    EmptySupport,

    #[error("image has no strictly positive pixel")]
    AllZeroImage,

    #[error("band sums to zero")]
    ZeroBand,

    #[error("every band of the image sums to zero")]
    AllBandsZero,

    #[error("instance size {size} exceeds the exact-solver cap {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("no grid point satisfies the transport constraint")]
    EmptyFeasibleSet,

    #[error("{0}")]
    InvalidInput(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
