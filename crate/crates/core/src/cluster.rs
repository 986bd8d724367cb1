//! Cluster-guided online repair.
//!
//! The local cleaner trusts the first compatible successor, which an outlier
//! can impersonate. Here the whole lookahead window is grouped into clusters
//! of mutually compatible points first, and the key is judged against the
//! seed of the *largest* cluster, the dominant trend of the window. The key
//! is kept only when it respects the constraint with both the previous fixed
//! point and that representative; otherwise it is interpolated between them.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::Stopwatch;
use crate::series::{
    satisfies_unchecked, within_reach, DataPoint, RepairResult, SpeedConstraint, TimeSeries,
};
use crate::streaming::interpolate;

/// Role of a window point during cluster construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterFlag {
    /// Not assigned to any cluster.
    Omitted,
    /// First point of a cluster.
    Seed,
    /// Member of the cluster seeded at this window index.
    Member(usize),
}

/// A cluster over window-relative indices. The seed is the earliest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowCluster {
    pub seed_index: usize,
    /// Strictly increasing window indices, starting with the seed.
    pub members: Vec<usize>,
}

impl WindowCluster {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Group the lookahead window into clusters, given the previous fixed point.
///
/// The first window point within reach of `prev_fixed` seeds the first
/// cluster; earlier points are omitted. Each later point `i` scans backwards
/// from its neighbour: the first compatible predecessor adopts it into that
/// predecessor's cluster (unless that predecessor was itself omitted, which
/// ends the scan with `i` omitted). An incompatible predecessor that is a
/// member, or reaching the first seed, stops the scan; `i` then seeds a new
/// cluster if it is within reach of `prev_fixed`. Returns clusters in seed
/// order; empty when no window point is within reach of `prev_fixed`.
///
/// Reach from `prev_fixed` means the candidate-range ball
/// `d <= s_max * dt`: a point beyond the window cannot seed a cluster merely
/// by being unconstrained, since seeds anchor repairs and must themselves
/// respect the bound toward the fixed point. Checks between window points
/// use the ordinary predicate; those pairs always share the key's window.
pub fn build_clusters(
    prev_fixed: &DataPoint,
    window: &[DataPoint],
    constraint: &SpeedConstraint,
) -> Vec<WindowCluster> {
    build_clusters_flagged(prev_fixed, window, constraint).0
}

pub(crate) fn build_clusters_flagged(
    prev_fixed: &DataPoint,
    window: &[DataPoint],
    constraint: &SpeedConstraint,
) -> (Vec<WindowCluster>, Vec<ClusterFlag>) {
    let mut flags = alloc::vec![ClusterFlag::Omitted; window.len()];
    let mut clusters: Vec<WindowCluster> = Vec::new();

    let Some(first_seed) = window
        .iter()
        .position(|p| within_reach(prev_fixed, p, constraint))
    else {
        return (clusters, flags);
    };
    flags[first_seed] = ClusterFlag::Seed;
    clusters.push(WindowCluster {
        seed_index: first_seed,
        members: alloc::vec![first_seed],
    });

    for i in (first_seed + 1)..window.len() {
        let mut j = i - 1;
        loop {
            if satisfies_unchecked(&window[i], &window[j], constraint) {
                match flags[j] {
                    ClusterFlag::Seed => {
                        flags[i] = ClusterFlag::Member(j);
                        attach(&mut clusters, j, i);
                    }
                    ClusterFlag::Member(seed) => {
                        flags[i] = ClusterFlag::Member(seed);
                        attach(&mut clusters, seed, i);
                    }
                    // A compatible but omitted predecessor ends the scan
                    // without adopting `i`.
                    ClusterFlag::Omitted => {}
                }
                break;
            }
            if j == first_seed || matches!(flags[j], ClusterFlag::Member(_)) {
                if within_reach(prev_fixed, &window[i], constraint) {
                    flags[i] = ClusterFlag::Seed;
                    clusters.push(WindowCluster {
                        seed_index: i,
                        members: alloc::vec![i],
                    });
                }
                break;
            }
            j -= 1;
        }
    }

    (clusters, flags)
}

fn attach(clusters: &mut [WindowCluster], seed: usize, member: usize) {
    let cluster = clusters
        .iter_mut()
        .find(|c| c.seed_index == seed)
        .expect("member flags always point at a seeded cluster");
    cluster.members.push(member);
}

/// Decide one key point given the previous fixed point and the key's
/// lookahead window (points strictly after the key, within one window).
///
/// Keeps the key when it satisfies the constraint with both the previous
/// fixed point and the representative (the largest cluster's seed, earliest
/// seed on ties); otherwise interpolates between the two anchors. With no
/// clusters at all, a compatible key is kept and an incompatible one takes
/// the previous fixed point's values.
pub(crate) fn decide_key(
    prev_fixed: &DataPoint,
    key: &DataPoint,
    window: &[DataPoint],
    constraint: &SpeedConstraint,
) -> DataPoint {
    let clusters = build_clusters(prev_fixed, window, constraint);
    // Largest cluster wins; the earliest seed wins ties.
    let representative = clusters.split_first().map(|(first, rest)| {
        let mut best = first;
        for c in rest {
            if c.size() > best.size() {
                best = c;
            }
        }
        &window[best.seed_index]
    });

    let keep_prev = satisfies_unchecked(prev_fixed, key, constraint);
    match representative {
        Some(rep) => {
            if keep_prev && satisfies_unchecked(key, rep, constraint) {
                key.clone()
            } else {
                interpolate(prev_fixed, rep, key.timestamp)
            }
        }
        None => {
            if keep_prev {
                key.clone()
            } else {
                DataPoint::new(key.timestamp, prev_fixed.values.clone())
            }
        }
    }
}

/// Incremental cluster cleaner. A point is decided once its whole lookahead
/// window has arrived, so latency is bounded by one window.
#[derive(Debug, Clone)]
pub struct ClusterCleaner {
    constraint: SpeedConstraint,
    last_fixed: Option<DataPoint>,
    /// Arrived but undecided points, oldest first; the front is the key.
    undecided: VecDeque<DataPoint>,
    dimension: Option<usize>,
    last_arrival: Option<f64>,
}

impl ClusterCleaner {
    pub fn new(constraint: SpeedConstraint) -> Self {
        ClusterCleaner {
            constraint,
            last_fixed: None,
            undecided: VecDeque::new(),
            dimension: None,
            last_arrival: None,
        }
    }

    pub fn constraint(&self) -> &SpeedConstraint {
        &self.constraint
    }

    pub fn buffered(&self) -> usize {
        self.undecided.len()
    }

    /// Feed one point; returns every point whose window is now complete.
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
        if self.last_fixed.is_none() && self.undecided.is_empty() {
            // First point of the stream is assumed clean.
            self.last_fixed = Some(point.clone());
            out.push(point);
            return Ok(out);
        }

        self.undecided.push_back(point);
        // Decide every key whose window is now fully buffered.
        while let Some(key) = self.undecided.front() {
            let newest = self
                .undecided
                .back()
                .expect("nonempty queue has a back")
                .timestamp;
            if newest <= key.timestamp + self.constraint.window() {
                break;
            }
            let decided = self.decide_front();
            out.push(decided);
        }
        Ok(out)
    }

    /// End of stream: decide the remaining points against truncated windows.
    pub fn flush(&mut self) -> Vec<DataPoint> {
        let mut out = Vec::new();
        while !self.undecided.is_empty() {
            out.push(self.decide_front());
        }
        out
    }

    fn decide_front(&mut self) -> DataPoint {
        let key = self.undecided.pop_front().expect("caller checked nonempty");
        let prev = self
            .last_fixed
            .clone()
            .expect("a key is only decided after the first point");
        let horizon = key.timestamp + self.constraint.window();
        let window: Vec<DataPoint> = self
            .undecided
            .iter()
            .take_while(|p| p.timestamp <= horizon)
            .cloned()
            .collect();
        let decided = decide_key(&prev, &key, &window, &self.constraint);
        self.last_fixed = Some(decided.clone());
        decided
    }
}

/// Batch wrapper: push every point, then flush. `O(w^2 * D * n)` time.
pub fn clean(ts: &TimeSeries, constraint: &SpeedConstraint) -> RepairResult {
    let watch = Stopwatch::start();
    let mut cleaner = ClusterCleaner::new(*constraint);
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
