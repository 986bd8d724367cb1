//! Data model shared by every cleaner: points, series, constraints, results.
//!
//! A [`TimeSeries`] is an ordered run of [`DataPoint`]s with strictly
//! increasing timestamps and a fixed number of dimensions. A
//! [`SpeedConstraint`] bounds the Euclidean speed between any two points
//! whose timestamps are at most one window apart; pairs further apart are
//! unconstrained.

use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::error::{Error, Result};
use crate::math;

/// One observation: a timestamp in seconds and one value per dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DataPoint {
    pub timestamp: f64,
    pub values: Vec<f64>,
}

impl DataPoint {
    pub fn new(timestamp: f64, values: Vec<f64>) -> Self {
        DataPoint { timestamp, values }
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }
}

/// Maximum speed `s_max` (distance units per second) enforced between all
/// pairs of points at most `window` seconds apart. The minimum speed is
/// always zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedConstraint {
    s_max: f64,
    window: f64,
}

impl SpeedConstraint {
    pub fn new(s_max: f64, window: f64) -> Result<Self> {
        if !s_max.is_finite() || s_max <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "s_max",
                reason: "must be finite and > 0",
            });
        }
        if !window.is_finite() || window <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "window",
                reason: "must be finite and > 0",
            });
        }
        Ok(SpeedConstraint { s_max, window })
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    /// Same window, new maximum speed.
    pub fn with_s_max(&self, s_max: f64) -> Result<Self> {
        SpeedConstraint::new(s_max, self.window)
    }
}

/// Structural problem found in a list of points.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationIssue {
    /// Index of the offending point.
    pub index: usize,
    pub kind: IssueKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IssueKind {
    /// Timestamp is not strictly greater than its predecessor's.
    NonIncreasingTimestamp {
        previous: f64,
        found: f64,
    },
    NonFiniteTimestamp {
        found: f64,
    },
    /// Point has a different number of values than the first point.
    ArityMismatch {
        expected: usize,
        found: usize,
    },
    /// A value is NaN or infinite.
    NonFiniteValue {
        dim: usize,
        found: f64,
    },
    /// Point carries no values at all.
    EmptyValues,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            IssueKind::NonIncreasingTimestamp { previous, found } => write!(
                f,
                "point {}: timestamp {} not greater than previous {}",
                self.index, found, previous
            ),
            IssueKind::NonFiniteTimestamp { found } => {
                write!(f, "point {}: non-finite timestamp {}", self.index, found)
            }
            IssueKind::ArityMismatch { expected, found } => write!(
                f,
                "point {}: has {} values, series has {} dimensions",
                self.index, found, expected
            ),
            IssueKind::NonFiniteValue { dim, found } => write!(
                f,
                "point {}: non-finite value {} in dimension {}",
                self.index, found, dim
            ),
            IssueKind::EmptyValues => write!(f, "point {}: no values", self.index),
        }
    }
}

/// Report every structural violation in `points`: timestamps that fail to
/// increase, arity mismatches against the first point, and non-finite
/// numbers. An empty report means the points form a valid series.
pub fn validate(points: &[DataPoint]) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    let dimension = points.first().map(|p| p.dimension()).unwrap_or(0);
    let mut prev_ts: Option<f64> = None;
    for (index, point) in points.iter().enumerate() {
        if !point.timestamp.is_finite() {
            issues.push(ValidationIssue {
                index,
                kind: IssueKind::NonFiniteTimestamp {
                    found: point.timestamp,
                },
            });
        } else if let Some(prev) = prev_ts {
            if point.timestamp <= prev {
                issues.push(ValidationIssue {
                    index,
                    kind: IssueKind::NonIncreasingTimestamp {
                        previous: prev,
                        found: point.timestamp,
                    },
                });
            }
        }
        if point.timestamp.is_finite() {
            prev_ts = Some(point.timestamp);
        }

        if point.dimension() == 0 {
            issues.push(ValidationIssue {
                index,
                kind: IssueKind::EmptyValues,
            });
        } else if point.dimension() != dimension {
            issues.push(ValidationIssue {
                index,
                kind: IssueKind::ArityMismatch {
                    expected: dimension,
                    found: point.dimension(),
                },
            });
        }
        for (dim, &v) in point.values.iter().enumerate() {
            if !v.is_finite() {
                issues.push(ValidationIssue {
                    index,
                    kind: IssueKind::NonFiniteValue { dim, found: v },
                });
            }
        }
    }
    issues
}

/// An ordered multivariate series. Construction validates the structural
/// invariants, so holders can rely on strictly increasing finite timestamps,
/// uniform arity, and finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    points: Vec<DataPoint>,
    dimension: usize,
}

impl TimeSeries {
    /// Build a series, rejecting the first structural violation.
    pub fn new(points: Vec<DataPoint>) -> Result<Self> {
        if let Some(issue) = validate(&points).into_iter().next() {
            return Err(Error::InvalidSeries(issue));
        }
        let dimension = points.first().map(|p| p.dimension()).unwrap_or(0);
        Ok(TimeSeries { points, dimension })
    }

    pub fn empty() -> Self {
        TimeSeries {
            points: Vec::new(),
            dimension: 0,
        }
    }

    /// Empty series that still knows its arity, e.g. parsed from a file
    /// with a header but no rows.
    pub fn empty_with_dimension(dimension: usize) -> Self {
        TimeSeries {
            points: Vec::new(),
            dimension,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn get(&self, index: usize) -> Option<&DataPoint> {
        self.points.get(index)
    }

    pub fn iter(&self) -> core::slice::Iter<'_, DataPoint> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<DataPoint> {
        self.points
    }

    /// Rebuild a series from points already known to satisfy the invariants.
    pub(crate) fn from_validated(points: Vec<DataPoint>) -> Self {
        debug_assert!(validate(&points).is_empty());
        let dimension = points.first().map(|p| p.dimension()).unwrap_or(0);
        TimeSeries { points, dimension }
    }
}

impl<'a> IntoIterator for &'a TimeSeries {
    type Item = &'a DataPoint;
    type IntoIter = core::slice::Iter<'a, DataPoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Euclidean distance between the value vectors of two points.
///
/// Errors when the points have different arity. Symmetric, and zero exactly
/// when the values are equal.
pub fn distance(a: &DataPoint, b: &DataPoint) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            found: b.dimension(),
        });
    }
    Ok(distance_unchecked(a, b))
}

#[inline]
pub(crate) fn distance_unchecked(a: &DataPoint, b: &DataPoint) -> f64 {
    debug_assert_eq!(a.dimension(), b.dimension());
    let sum: f64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    math::sqrt(sum)
}

/// Whether the pair `(a, b)` respects the constraint.
///
/// With `dt = |t_b - t_a|`, the pair satisfies when `dt` exceeds the window
/// (the constraint only reaches one window ahead) or the speed
/// `distance(a, b) / dt` is at most `s_max`. The comparison is a plain `<=`
/// on doubles. Coincident timestamps have no defined speed and are an error.
pub fn satisfies(a: &DataPoint, b: &DataPoint, constraint: &SpeedConstraint) -> Result<bool> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            found: b.dimension(),
        });
    }
    if a.timestamp == b.timestamp {
        return Err(Error::CoincidentTimestamps {
            timestamp: a.timestamp,
        });
    }
    Ok(satisfies_unchecked(a, b, constraint))
}

#[inline]
pub(crate) fn satisfies_unchecked(
    a: &DataPoint,
    b: &DataPoint,
    constraint: &SpeedConstraint,
) -> bool {
    let dt = (b.timestamp - a.timestamp).abs();
    debug_assert!(dt > 0.0);
    if dt > constraint.window() {
        return true;
    }
    distance_unchecked(a, b) <= constraint.s_max() * dt
}

/// Candidate-range membership: `b` lies within the ball of radius
/// `s_max * dt` around `a`. Unlike [`satisfies`], pairs beyond the window
/// are not admitted for free; repairs anchored on a point that passes this
/// check are guaranteed to respect the constraint toward `a`.
#[inline]
pub(crate) fn within_reach(a: &DataPoint, b: &DataPoint, constraint: &SpeedConstraint) -> bool {
    let dt = (b.timestamp - a.timestamp).abs();
    debug_assert!(dt > 0.0);
    distance_unchecked(a, b) <= constraint.s_max() * dt
}

/// Outcome of a repair: the repaired series plus summary statistics against
/// the input it was produced from.
#[derive(Debug, Clone, PartialEq)]
pub struct RepairResult {
    /// Repaired series; same length, dimension, and timestamps as the input.
    pub repaired: TimeSeries,
    /// Sorted indices whose values differ from the input.
    pub fixed_indices: Vec<usize>,
    /// Number of modified points.
    pub repair_count: usize,
    /// Mean per-point Euclidean distance between input and output.
    pub repair_distance: f64,
    /// Wall time of the repair call (zero without the `std` feature).
    pub elapsed: Duration,
}

impl RepairResult {
    /// Derive the summary statistics by comparing output with input.
    pub(crate) fn from_output(input: &TimeSeries, repaired: TimeSeries, elapsed: Duration) -> Self {
        debug_assert_eq!(input.len(), repaired.len());
        let mut fixed_indices = Vec::new();
        let mut total_distance = 0.0;
        for (i, (before, after)) in input.iter().zip(repaired.iter()).enumerate() {
            debug_assert_eq!(before.timestamp, after.timestamp);
            if before.values != after.values {
                fixed_indices.push(i);
            }
            total_distance += distance_unchecked(before, after);
        }
        let repair_distance = if input.is_empty() {
            0.0
        } else {
            total_distance / input.len() as f64
        };
        RepairResult {
            repaired,
            repair_count: fixed_indices.len(),
            fixed_indices,
            repair_distance,
            elapsed,
        }
    }

    /// Fraction of points modified.
    pub fn repair_fraction(&self) -> f64 {
        if self.repaired.is_empty() {
            0.0
        } else {
            self.repair_count as f64 / self.repaired.len() as f64
        }
    }
}

/// Every pair of output points at most one window apart satisfies the
/// constraint. Used by tests and callers that want to double-check cleaner
/// output; quadratic in the number of points per window.
pub fn pairwise_within_window(ts: &TimeSeries, constraint: &SpeedConstraint) -> bool {
    let points = ts.points();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let dt = points[j].timestamp - points[i].timestamp;
            if dt > constraint.window() {
                break;
            }
            if !satisfies_unchecked(&points[i], &points[j], constraint) {
                return false;
            }
        }
    }
    true
}
