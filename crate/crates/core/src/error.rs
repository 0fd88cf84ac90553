use alloc::string::String;

use thiserror::Error;

use crate::quantale::ValueError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Value(#[from] ValueError),

    #[error("category has no objects")]
    Empty,

    #[error("duplicate object name {0:?}")]
    DuplicateName(String),

    #[error("hom matrix row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("index {index} out of range for {len} objects")]
    OutOfRange { index: usize, len: usize },

    #[error("object is not in the target space")]
    NotAnObject,

    #[error("expected {expected} entries, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("point has dimension {found}, space has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("tensor power exponent must be at least 1")]
    ZeroPower,

    #[error("materialized object would have {0} objects, limit is {1}")]
    TooLarge(u128, u128),

    #[error("fewer data points than k ({n} < {k})")]
    FewerPointsThanK { n: usize, k: usize },

    #[error("composition needs a finite middle category")]
    InfiniteMiddle,

    #[error("profunctor endpoints do not match")]
    EndpointMismatch,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("features and targets differ in length ({features} vs {targets})")]
    LengthMismatch { features: usize, targets: usize },

    #[error("epsilon must be a finite non-negative number")]
    BadEpsilon,

    #[error("operation requires a discrete label space")]
    NotDiscrete,

    #[error("biased policy preference order must list every label exactly once")]
    IncompletePreference,

    #[error("vote policies need a finite discrete label space")]
    VoteNeedsDiscrete,

    #[error("enumeration guard exceeded: {0}")]
    Guard(&'static str),

    #[error("grid is malformed: {0}")]
    BadGrid(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
