use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be between 1 and 8, got {0}")]
    DimensionOutOfRange(usize),
    #[error("order must be between 2 and 1000000, got {0}")]
    OrderOutOfRange(i64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(i64, i64),
    #[error("face vector entries must be -1, 0 or 1")]
    InvalidFaceEntry,
    #[error("digit set must contain at least one digit")]
    EmptyDigitSet,
    #[error("digit {digit} out of range for order {order}")]
    DigitOutOfRange { digit: String, order: i64 },
    #[error("digit {digit} has {got} coordinates, expected {expected}")]
    DigitArity {
        digit: String,
        got: usize,
        expected: usize,
    },
    #[error("face vector {0} has empty support")]
    EmptySupport(String),
    #[error("{0} is not a subface of {1}")]
    NotSubface(String, String),
    #[error("digit set is not constant on the support of {0}")]
    NotFaceConstant(String),
    #[error("section value {0} is not attained by any digit")]
    SectionNotAttained(String),
    #[error("depth must be at least 1")]
    InvalidDepth,
    #[error("invalid depth range {0}..{1}")]
    InvalidDepthRange(u32, u32),
    #[error("{cells} cells exceed the guard of {max}")]
    CellGuardExceeded { cells: u128, max: u64 },
    #[error("order {order}^{depth} overflows the supported range")]
    OrderOverflow { order: i64, depth: u32 },
    #[error("vertex {0} is empty")]
    NotAlive(String),
    #[error("intersection at {0} is not a finite set")]
    NotFinite(String),
    #[error("cardinality count exceeds the u64 range")]
    CountOverflow,
    #[error("no adjacent cells at depth {0}; nothing to estimate")]
    EmptyAtDepth(u32),
    #[error("raster output requires dimension 2, got {0}")]
    RasterDimension(usize),
    #[error("image side {side} exceeds the guard of {max}")]
    ImageGuardExceeded { side: i64, max: i64 },
    #[error("{0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by a size guard rather than invalid input.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::CellGuardExceeded { .. }
                | Error::OrderOverflow { .. }
                | Error::ImageGuardExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
