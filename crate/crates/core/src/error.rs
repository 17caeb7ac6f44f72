use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LeakageError {
    #[error("empty probability vector")]
    Empty,
    #[error("negative probability {value} at {}", locate(*row, *index))]
    NegativeEntry {
        row: Option<usize>,
        index: usize,
        value: f64,
    },
    #[error("probabilities sum to {sum}, not 1{}", row.map(|r| format!(" (row {r})")).unwrap_or_default())]
    NotNormalized { row: Option<usize>, sum: f64 },
    #[error("non-finite probability at {}", locate(*row, *index))]
    NonFinite { row: Option<usize>, index: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("input symbol {0} has no preimage under the assignment")]
    UncoveredX(usize),
    #[error("alpha = {0} is outside the admissible range")]
    AlphaOutOfRange(f64),
    #[error("empty support set")]
    EmptySupport,
    #[error("support index {index} out of range for alphabet of size {size}")]
    SupportOutOfRange { index: usize, size: usize },
    #[error("support of size {0} is too large for the grid oracle (max 4)")]
    SupportTooLarge(usize),
    #[error("grid resolution {0} is below the allowed minimum 1e-3")]
    ResolutionTooFine(f64),
    #[error("target has mass on symbol {0}, which lies outside the prior support")]
    InfeasibleTarget(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

fn locate(row: Option<usize>, index: usize) -> String {
    match row {
        Some(r) => format!("row {r}, column {index}"),
        None => format!("index {index}"),
    }
}

impl LeakageError {
    pub(crate) fn in_row(self, row: usize) -> Self {
        match self {
            LeakageError::NegativeEntry { index, value, .. } => LeakageError::NegativeEntry {
                row: Some(row),
                index,
                value,
            },
            LeakageError::NotNormalized { sum, .. } => LeakageError::NotNormalized {
                row: Some(row),
                sum,
            },
            LeakageError::NonFinite { index, .. } => LeakageError::NonFinite {
                row: Some(row),
                index,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, LeakageError>;
