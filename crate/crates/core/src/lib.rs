//! Repair of multivariate time series under speed constraints.
//!
//! A speed constraint bounds how fast the (Euclidean) value of a series may
//! change per unit of time within a sliding time window. Observations that
//! move faster than the bound are treated as errors and repaired, changing as
//! few points as possible rather than minimising the total displacement.
//!
//! Four cleaners are provided:
//!
//! - [`global::clean`]: batch repair with a provably minimal number of fixed
//!   points, found by a longest-compatible-subsequence dynamic program.
//! - [`streaming::clean`] / [`streaming::LocalCleaner`]: online repair that
//!   decides each point against the last accepted point, with at most one
//!   window of lookahead.
//! - [`cluster::clean`] / [`cluster::ClusterCleaner`]: online repair that
//!   clusters the lookahead window and repairs toward the dominant trend.
//! - [`adaptive::clean`]: the cluster cleaner with a self-tuning speed bound,
//!   re-estimated whenever the observed speed distribution drifts (measured
//!   by KL divergence over bucketed speed histograms).
//!
//! The [`quality`] module carries the evaluation side: seeded error
//! injection, RMSE / repair-distance / repair-number metrics, and an
//! exponentially weighted moving average baseline.
//!
//! Series, points, and constraints are plain value types and the batch
//! cleaners are pure functions, so everything can be shared or moved across
//! threads freely; the incremental [`streaming::LocalCleaner`] and
//! [`cluster::ClusterCleaner`] states are single-writer, one per stream.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable the default
//! `std` feature and enable `libm` instead.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("either the `std` or the `libm` feature must be enabled");

pub mod adaptive;
pub mod cluster;
mod error;
pub mod global;
mod math;
pub mod quality;
pub mod rng;
pub mod series;
pub mod streaming;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use series::{
    distance, satisfies, validate, DataPoint, IssueKind, RepairResult, SpeedConstraint, TimeSeries,
    ValidationIssue,
};
