use alloc::string::String;
use alloc::vec::Vec;

use crate::calendar::YearMonth;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("series of length {len} is too short: need more than {needed} observations")]
    TooShort { len: usize, needed: usize },

    #[error("symmetric growth undefined at {month}: both values are zero")]
    ZeroDenominator { month: YearMonth },

    #[error("split boundary {boundary} is not strictly inside {first}..={last}")]
    BoundaryOutsideSpan {
        boundary: YearMonth,
        first: YearMonth,
        last: YearMonth,
    },

    #[error("max lag {p} must satisfy 1 <= p < {len}")]
    InvalidLag { p: usize, len: usize },

    #[error("model references lag {needed} but the embedding only has {available} lags")]
    MissingLag { needed: usize, available: usize },

    #[error("model too complex: effective parameters {effective} >= rows {n}")]
    ModelTooComplex { effective: f64, n: usize },

    #[error("degenerate embedding: {0}")]
    DegenerateEmbedding(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("fractional order {0} outside [0, 1]")]
    OrderOutOfRange(f64),

    #[error("zero variance")]
    ZeroVariance,

    #[error("objective is flat: the series is constant")]
    FlatObjective,

    #[error("collinear lag columns: {lags:?}")]
    RankDeficient { lags: Vec<usize> },

    #[error("numerical failure: {0}")]
    Numerical(&'static str),
}
