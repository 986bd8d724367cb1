//! Shared fixtures for unit tests.

use alloc::vec::Vec;

use crate::series::{DataPoint, TimeSeries};

pub(crate) fn pt(t: f64, values: &[f64]) -> DataPoint {
    DataPoint::new(t, values.to_vec())
}

pub(crate) fn series(raw: &[(f64, &[f64])]) -> TimeSeries {
    TimeSeries::new(
        raw.iter()
            .map(|(t, v)| DataPoint::new(*t, v.to_vec()))
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

/// Seven 2-D points on a flat trend with two upward jumps, unit timestamps
/// starting at 1.
pub(crate) fn jump_series() -> TimeSeries {
    series(&[
        (1.0, &[1.0, 1.0]),
        (2.0, &[1.8, 1.8]),
        (3.0, &[2.6, 1.0]),
        (4.0, &[3.4, 1.0]),
        (5.0, &[4.5, 1.0]),
        (6.0, &[5.5, 1.0]),
        (7.0, &[6.4, 1.0]),
    ])
}

/// Eight 2-D points with three off-trend observations, unit timestamps
/// starting at 0. The first point is clean by construction.
pub(crate) fn drift_series() -> TimeSeries {
    series(&[
        (0.0, &[1.0, 1.0]),
        (1.0, &[1.8, 1.8]),
        (2.0, &[2.6, 2.0]),
        (3.0, &[3.5, 1.0]),
        (4.0, &[4.5, 1.0]),
        (5.0, &[5.5, 0.5]),
        (6.0, &[6.5, 1.0]),
        (7.0, &[7.5, 1.0]),
    ])
}
