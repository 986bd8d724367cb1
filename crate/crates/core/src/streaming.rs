//! Online local repair with one window of lookahead.
//!
//! Each arriving point is decided against the last finalised point. A point
//! that respects the constraint is emitted unchanged and becomes the new
//! anchor. A violating point becomes the *pending key*: later points are
//! buffered until one of them satisfies the constraint with the anchor, at
//! which moment the key is repaired by interpolating between anchor and that
//! point. If the window elapses first (or the stream ends), the key takes
//! the anchor's values. Buffered points then re-enter, in order, as future
//! keys, so every point is decided exactly once and emission order follows
//! timestamps. Worst-case latency is one window; the buffer never holds
//! more than one window of points.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::Stopwatch;
use crate::series::{satisfies_unchecked, DataPoint, RepairResult, SpeedConstraint, TimeSeries};

/// Incremental state for one stream.
#[derive(Debug, Clone)]
pub struct LocalCleaner {
    constraint: SpeedConstraint,
    /// Last finalised point (repaired value, original timestamp).
    last_fixed: Option<DataPoint>,
    /// Key waiting for a compatible successor or window expiry.
    pending: Option<DataPoint>,
    /// Points after the pending key, all inside its window, none compatible
    /// with the anchor.
    lookahead: VecDeque<DataPoint>,
    dimension: Option<usize>,
    last_arrival: Option<f64>,
}

impl LocalCleaner {
    pub fn new(constraint: SpeedConstraint) -> Self {
        LocalCleaner {
            constraint,
            last_fixed: None,
            pending: None,
            lookahead: VecDeque::new(),
            dimension: None,
            last_arrival: None,
        }
    }

    pub fn constraint(&self) -> &SpeedConstraint {
        &self.constraint
    }

    /// Number of points currently buffered (pending key excluded).
    pub fn buffered(&self) -> usize {
        self.lookahead.len()
    }

    /// Feed one point; returns every point finalised by this arrival, in
    /// timestamp order. Timestamps must be strictly increasing across calls.
    pub fn push(&mut self, point: DataPoint) -> Result<Vec<DataPoint>> {
        if let Some(last) = self.last_arrival {
            if point.timestamp <= last {
                return Err(Error::OutOfOrderTimestamp {
                    previous: last,
                    arrived: point.timestamp,
                });
            }
        }
        if !point.timestamp.is_finite() {
            return Err(Error::InvalidParameter {
                name: "timestamp",
                reason: "must be finite",
            });
        }
        match self.dimension {
            None => {
                if point.dimension() == 0 {
                    return Err(Error::EmptyInput);
                }
                self.dimension = Some(point.dimension());
            }
            Some(d) => {
                if point.dimension() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: point.dimension(),
                    });
                }
            }
        }
        self.last_arrival = Some(point.timestamp);

        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        queue.push_back(point);
        self.drain(&mut queue, &mut out, false);
        Ok(out)
    }

    /// End of stream: resolve the pending key as if its window had expired
    /// and run the buffered points through as keys.
    pub fn flush(&mut self) -> Vec<DataPoint> {
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        self.drain(&mut queue, &mut out, true);
        out
    }

    /// Process queued points. On key resolution the buffer re-enters the
    /// queue ahead of the point that triggered the resolution. With
    /// `at_end`, pending keys resolve immediately by copying the anchor.
    fn drain(&mut self, queue: &mut VecDeque<DataPoint>, out: &mut Vec<DataPoint>, at_end: bool) {
        loop {
            if at_end && queue.is_empty() {
                match self.pending.take() {
                    Some(key) => {
                        // Window treated as expired: anchor values win.
                        let anchor = self
                            .last_fixed
                            .clone()
                            .expect("pending key implies an anchor");
                        self.finalize(DataPoint::new(key.timestamp, anchor.values), out);
                        while let Some(b) = self.lookahead.pop_back() {
                            queue.push_front(b);
                        }
                        continue;
                    }
                    None => break,
                }
            }
            let Some(point) = queue.pop_front() else {
                break;
            };

            let Some(anchor) = self.last_fixed.clone() else {
                // Very first point of the stream is always kept.
                self.finalize(point, out);
                continue;
            };

            match self.pending.take() {
                None => {
                    if satisfies_unchecked(&point, &anchor, &self.constraint) {
                        self.finalize(point, out);
                    } else {
                        self.pending = Some(point);
                    }
                }
                Some(key) => {
                    if point.timestamp > key.timestamp + self.constraint.window() {
                        // Window expired: key takes the anchor's values.
                        self.finalize(DataPoint::new(key.timestamp, anchor.values), out);
                        queue.push_front(point);
                        while let Some(b) = self.lookahead.pop_back() {
                            queue.push_front(b);
                        }
                    } else if satisfies_unchecked(&point, &anchor, &self.constraint) {
                        // First compatible successor: interpolate the key
                        // between the anchor and this point.
                        let repaired = interpolate(&anchor, &point, key.timestamp);
                        self.finalize(repaired, out);
                        queue.push_front(point);
                        while let Some(b) = self.lookahead.pop_back() {
                            queue.push_front(b);
                        }
                    } else {
                        self.pending = Some(key);
                        self.lookahead.push_back(point);
                    }
                }
            }
        }
    }

    fn finalize(&mut self, point: DataPoint, out: &mut Vec<DataPoint>) {
        self.last_fixed = Some(point.clone());
        out.push(point);
    }
}

/// Linear interpolation of the key's values on the segment from `anchor`
/// to `successor`, evaluated at the key's timestamp.
pub(crate) fn interpolate(anchor: &DataPoint, successor: &DataPoint, key_ts: f64) -> DataPoint {
    let alpha = (key_ts - anchor.timestamp) / (successor.timestamp - anchor.timestamp);
    let values = anchor
        .values
        .iter()
        .zip(&successor.values)
        .map(|(a, s)| alpha * (s - a) + a)
        .collect();
    DataPoint::new(key_ts, values)
}

/// Batch wrapper: push every point, then flush. `O(w * D * n)` time.
pub fn clean(ts: &TimeSeries, constraint: &SpeedConstraint) -> RepairResult {
    let watch = Stopwatch::start();
    let mut cleaner = LocalCleaner::new(*constraint);
    let mut output = Vec::with_capacity(ts.len());
    for point in ts.iter() {
        let emitted = cleaner
            .push(point.clone())
            .expect("validated series streams in order");
        output.extend(emitted);
    }
    output.extend(cleaner.flush());
    RepairResult::from_output(ts, TimeSeries::from_validated(output), watch.elapsed())
}
