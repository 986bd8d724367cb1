//! Self-tuning speed constraint driven by drift in the speed distribution.
//!
//! Consecutive-point speeds from the raw observations are bucketed into two
//! adjacent sliding histograms of `interval` speeds each. Once both are
//! full, every new speed first compares the windows by KL divergence; when
//! the divergence exceeds the threshold, the bound is re-estimated as the
//! 95th-percentile speed of the newer window divided by the modify factor,
//! and both histograms are rebucketed under the new bound. The windows then
//! rotate: the newer window's oldest speed moves into the older window, and
//! the fresh speed enters the newer window.
//!
//! [`clean`] runs the cluster cleaner with the constraint updated this way
//! before every key decision.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::cluster::decide_key;
use crate::error::{Error, Result};
use crate::math::{ln, Stopwatch};
use crate::series::{distance_unchecked, DataPoint, RepairResult, SpeedConstraint, TimeSeries};

/// Bucketed frequency distribution of nonnegative speeds.
///
/// There are `buckets` buckets in total: `buckets - 1` finite intervals of
/// width `s_max / (buckets - 1)` covering `[0, s_max]` with closed right
/// edges, plus one overflow bucket for speeds above `s_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedHistogram {
    counts: Vec<u32>,
    bucket_width: f64,
    s_max: f64,
}

impl SpeedHistogram {
    /// Bucket `speeds` under the bound `s_max`. A speed exactly on a bucket
    /// edge falls into the lower bucket.
    pub fn from_speeds(speeds: &[f64], buckets: usize, s_max: f64) -> Result<Self> {
        if buckets < 2 {
            return Err(Error::InvalidParameter {
                name: "buckets",
                reason: "need at least 2 (one finite bucket plus overflow)",
            });
        }
        if !s_max.is_finite() || s_max <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "s_max",
                reason: "must be finite and > 0",
            });
        }
        let bucket_width = s_max / (buckets - 1) as f64;
        let mut counts = vec![0u32; buckets];
        for &speed in speeds {
            if speed < 0.0 || !speed.is_finite() {
                return Err(Error::NegativeSpeed { value: speed });
            }
            counts[bucket_index(speed, buckets, bucket_width, s_max)] += 1;
        }
        Ok(SpeedHistogram {
            counts,
            bucket_width,
            s_max,
        })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn buckets(&self) -> usize {
        self.counts.len()
    }

    pub fn bucket_width(&self) -> f64 {
        self.bucket_width
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

fn bucket_index(speed: f64, buckets: usize, width: f64, s_max: f64) -> usize {
    if speed > s_max {
        return buckets - 1;
    }
    // Scan the closed right edges; the last finite edge is s_max itself so
    // the comparison stays exact under rounding of width.
    for k in 1..buckets {
        let edge = if k == buckets - 1 {
            s_max
        } else {
            k as f64 * width
        };
        if speed <= edge {
            return k - 1;
        }
    }
    buckets - 1
}

/// KL divergence `D(P1 || P2)` of the normalised histograms, natural log.
///
/// Buckets where `P1` is zero contribute nothing; buckets where `P1` is
/// positive but `P2` is zero are smoothed by flooring `P2` at
/// `1 / (total2 * buckets)`, which vanishes as the windows grow.
pub fn kl_divergence(h1: &SpeedHistogram, h2: &SpeedHistogram) -> Result<f64> {
    let total2 = h2.total();
    let buckets = h2.buckets() as u64;
    let epsilon = if total2 == 0 {
        0.0 // unreachable: the empty check below fires first
    } else {
        1.0 / (total2 * buckets) as f64
    };
    kl_divergence_smoothed(h1, h2, epsilon)
}

/// KL divergence with an explicit floor for zero denominators.
pub fn kl_divergence_smoothed(
    h1: &SpeedHistogram,
    h2: &SpeedHistogram,
    epsilon: f64,
) -> Result<f64> {
    if h1.buckets() != h2.buckets() {
        return Err(Error::BucketCountMismatch {
            left: h1.buckets(),
            right: h2.buckets(),
        });
    }
    let (t1, t2) = (h1.total(), h2.total());
    if t1 == 0 || t2 == 0 {
        return Err(Error::EmptyInput);
    }
    let mut divergence = 0.0;
    for (&c1, &c2) in h1.counts().iter().zip(h2.counts()) {
        if c1 == 0 {
            continue;
        }
        let p1 = c1 as f64 / t1 as f64;
        let p2 = if c2 == 0 {
            epsilon
        } else {
            c2 as f64 / t2 as f64
        };
        divergence += p1 * ln(p1 / p2);
    }
    // The epsilon floor makes the denominator mass exceed one, which can
    // push the sum a little below zero (true KL never is); clamp it.
    Ok(divergence.max(0.0))
}

/// Nearest-rank 95th percentile: the `ceil(0.95 * n)`-th smallest speed.
pub fn percentile_95(speeds: &[f64]) -> Result<f64> {
    if speeds.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = speeds.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (sorted.len() * 95).div_ceil(100);
    Ok(sorted[rank - 1])
}

/// Hyper-parameters of the adaptive constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveParams {
    /// Histogram buckets, including the overflow bucket.
    pub buckets: usize,
    /// KL divergence threshold that triggers re-estimation.
    pub kl_threshold: f64,
    /// Speeds per monitoring window.
    pub interval: usize,
    /// Divisor applied to the 95th-percentile speed on update, in (0, 1].
    pub modify_factor: f64,
}

impl AdaptiveParams {
    pub fn new(
        buckets: usize,
        kl_threshold: f64,
        interval: usize,
        modify_factor: f64,
    ) -> Result<Self> {
        if buckets < 2 {
            return Err(Error::InvalidParameter {
                name: "buckets",
                reason: "need at least 2",
            });
        }
        if !kl_threshold.is_finite() || kl_threshold <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "kl_threshold",
                reason: "must be > 0",
            });
        }
        if interval < 1 {
            return Err(Error::InvalidParameter {
                name: "interval",
                reason: "must be >= 1",
            });
        }
        if !modify_factor.is_finite() || modify_factor <= 0.0 || modify_factor > 1.0 {
            return Err(Error::InvalidParameter {
                name: "modify_factor",
                reason: "must be in (0, 1]",
            });
        }
        Ok(AdaptiveParams {
            buckets,
            kl_threshold,
            interval,
            modify_factor,
        })
    }
}

/// A change of the speed bound, recorded at the key timestamp that
/// triggered it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintChange {
    pub timestamp: f64,
    pub s_max: f64,
}

/// Two sliding speed windows with their histograms and the current bound.
#[derive(Debug, Clone)]
pub struct AdaptiveState {
    params: AdaptiveParams,
    current: SpeedConstraint,
    w1: VecDeque<f64>,
    w2: VecDeque<f64>,
    h1: SpeedHistogram,
    h2: SpeedHistogram,
}

impl AdaptiveState {
    pub fn new(initial: SpeedConstraint, params: AdaptiveParams) -> Self {
        let empty = SpeedHistogram::from_speeds(&[], params.buckets, initial.s_max())
            .expect("validated parameters");
        AdaptiveState {
            params,
            current: initial,
            w1: VecDeque::with_capacity(params.interval),
            w2: VecDeque::with_capacity(params.interval),
            h1: empty.clone(),
            h2: empty,
        }
    }

    pub fn constraint(&self) -> &SpeedConstraint {
        &self.current
    }

    pub fn histograms(&self) -> (&SpeedHistogram, &SpeedHistogram) {
        (&self.h1, &self.h2)
    }

    pub fn occupancy(&self) -> (usize, usize) {
        (self.w1.len(), self.w2.len())
    }

    /// Observe the speed between two consecutive raw observations and
    /// return the constraint to use for the key point, re-estimated when
    /// the windows have drifted apart.
    pub fn step(&mut self, prev: &DataPoint, key: &DataPoint) -> Result<SpeedConstraint> {
        if prev.dimension() != key.dimension() {
            return Err(Error::DimensionMismatch {
                expected: prev.dimension(),
                found: key.dimension(),
            });
        }
        if key.timestamp <= prev.timestamp {
            return Err(Error::OutOfOrderTimestamp {
                previous: prev.timestamp,
                arrived: key.timestamp,
            });
        }
        let speed = distance_unchecked(key, prev) / (key.timestamp - prev.timestamp);
        self.observe(speed)?;
        Ok(self.current)
    }

    fn observe(&mut self, speed: f64) -> Result<()> {
        let m = self.params.interval;
        if self.w1.len() < m {
            self.w1.push_back(speed);
            self.h1 = self.rebuild(&self.w1)?;
        } else if self.w2.len() < m {
            self.w2.push_back(speed);
            self.h2 = self.rebuild(&self.w2)?;
        } else {
            if kl_divergence(&self.h1, &self.h2)? > self.params.kl_threshold {
                let speeds: Vec<f64> = self.w2.iter().copied().collect();
                let s_new = percentile_95(&speeds)? / self.params.modify_factor;
                // Zero speeds are legal window entries, so the percentile
                // can be zero; the bound must stay positive, so such an
                // update is skipped.
                if s_new > 0.0 {
                    self.current = self.current.with_s_max(s_new)?;
                }
            }
            let rotated = self.w2.pop_front().expect("w2 is full here");
            self.w1.push_back(rotated);
            self.w1.pop_front();
            self.w2.push_back(speed);
            self.h1 = self.rebuild(&self.w1)?;
            self.h2 = self.rebuild(&self.w2)?;
        }
        Ok(())
    }

    fn rebuild(&self, window: &VecDeque<f64>) -> Result<SpeedHistogram> {
        let speeds: Vec<f64> = window.iter().copied().collect();
        SpeedHistogram::from_speeds(&speeds, self.params.buckets, self.current.s_max())
    }
}

/// Cluster-guided repair under the adaptive constraint.
pub fn clean(
    ts: &TimeSeries,
    initial: SpeedConstraint,
    params: AdaptiveParams,
) -> Result<RepairResult> {
    clean_traced(ts, initial, params).map(|(result, _)| result)
}

/// As [`clean`], also returning every change of the speed bound in order.
pub fn clean_traced(
    ts: &TimeSeries,
    initial: SpeedConstraint,
    params: AdaptiveParams,
) -> Result<(RepairResult, Vec<ConstraintChange>)> {
    let watch = Stopwatch::start();
    let points = ts.points();
    let mut trace = Vec::new();
    let mut state = AdaptiveState::new(initial, params);
    let mut output: Vec<DataPoint> = Vec::with_capacity(points.len());

    if let Some(first) = points.first() {
        output.push(first.clone());
    }
    for k in 1..points.len() {
        // The monitor watches raw observations, not repaired values.
        let constraint = state.step(&points[k - 1], &points[k])?;
        if constraint.s_max()
            != trace
                .last()
                .map_or(initial.s_max(), |c: &ConstraintChange| c.s_max)
        {
            trace.push(ConstraintChange {
                timestamp: points[k].timestamp,
                s_max: constraint.s_max(),
            });
        }
        let horizon = points[k].timestamp + constraint.window();
        let window_end = points[k + 1..]
            .iter()
            .take_while(|p| p.timestamp <= horizon)
            .count();
        let window = &points[k + 1..k + 1 + window_end];
        let prev = output[k - 1].clone();
        output.push(decide_key(&prev, &points[k], window, &constraint));
    }

    let result = RepairResult::from_output(ts, TimeSeries::from_validated(output), watch.elapsed());
    Ok((result, trace))
}
