use core::fmt;

use crate::series::ValidationIssue;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two points have a different number of dimensions.
    DimensionMismatch { expected: usize, found: usize },
    /// A pair of points shares the same timestamp, so no speed is defined.
    CoincidentTimestamps { timestamp: f64 },
    /// A streamed point arrived at or before the previous timestamp.
    OutOfOrderTimestamp { previous: f64, arrived: f64 },
    /// The operation needs at least one element.
    EmptyInput,
    /// A parameter is outside its legal range.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// The exhaustive search refuses inputs this large.
    SeriesTooLong { len: usize, max: usize },
    /// Two series that must be aligned have different lengths.
    LengthMismatch { left: usize, right: usize },
    /// A speed fed to a histogram was negative.
    NegativeSpeed { value: f64 },
    /// Two histograms have a different number of buckets.
    BucketCountMismatch { left: usize, right: usize },
    /// A series failed structural validation.
    InvalidSeries(ValidationIssue),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::CoincidentTimestamps { timestamp } => {
                write!(f, "points share timestamp {timestamp}")
            }
            Error::OutOfOrderTimestamp { previous, arrived } => write!(
                f,
                "timestamp {arrived} is not after the previous timestamp {previous}"
            ),
            Error::EmptyInput => write!(f, "input is empty"),
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::SeriesTooLong { len, max } => {
                write!(
                    f,
                    "series of length {len} exceeds the exhaustive-search limit {max}"
                )
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "series lengths differ: {left} vs {right}")
            }
            Error::NegativeSpeed { value } => write!(f, "negative speed {value}"),
            Error::BucketCountMismatch { left, right } => {
                write!(f, "histograms have {left} vs {right} buckets")
            }
            Error::InvalidSeries(issue) => write!(f, "invalid series: {issue}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
