//! Batch repair with a minimal number of fixed points.
//!
//! Finding the fewest points to repair is a generalisation of the longest
//! increasing subsequence problem: keep the longest subsequence in which
//! every consecutive pair respects the speed constraint (pairs further than
//! one window apart are unconstrained), then repair everything outside it by
//! interpolating between the nearest kept neighbours. Because constrained
//! distances compose through the triangle inequality, a chain whose
//! consecutive pairs satisfy the constraint satisfies it pairwise inside
//! every window, so the chain really is a feasible keep-set.
//!
//! [`brute_force_min_fix`] provides an independent exhaustive reference for
//! the minimum fix count on small inputs; tests hold [`find_fix_plan`] to it.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::Stopwatch;
use crate::series::{satisfies_unchecked, DataPoint, RepairResult, SpeedConstraint, TimeSeries};

/// Which points to repair and which to keep.
#[derive(Debug, Clone, PartialEq)]
pub struct FixPlan {
    /// Sorted indices that must be repaired.
    pub fix_list: Vec<usize>,
    /// Sorted indices kept as-is: a maximum-cardinality compatible chain.
    pub clean_list: Vec<usize>,
    /// Length of the kept chain (`clean_list.len()`).
    pub chain_length: usize,
}

/// Dynamic program over chain lengths: `dp[i]` is the longest compatible
/// chain ending at `i`, extending the first `j < i` that attains it. Ties on
/// the overall maximum keep the earliest end index, so the plan is
/// deterministic.
pub fn find_fix_plan(ts: &TimeSeries, constraint: &SpeedConstraint) -> FixPlan {
    let points = ts.points();
    let n = points.len();
    if n == 0 {
        return FixPlan {
            fix_list: Vec::new(),
            clean_list: Vec::new(),
            chain_length: 0,
        };
    }

    const NO_PRED: usize = usize::MAX;
    let mut dp = vec![1usize; n];
    let mut pred = vec![NO_PRED; n];
    let mut max_length = 0usize;
    let mut end_index = 0usize;

    for i in 0..n {
        for j in 0..i {
            if satisfies_unchecked(&points[i], &points[j], constraint) && dp[i] < dp[j] + 1 {
                dp[i] = dp[j] + 1;
                pred[i] = j;
            }
        }
        if dp[i] > max_length {
            max_length = dp[i];
            end_index = i;
        }
    }

    let mut clean_list = Vec::with_capacity(max_length);
    let mut idx = end_index;
    for _ in 0..max_length {
        clean_list.push(idx);
        idx = pred[idx];
    }
    clean_list.reverse();

    let mut is_clean = vec![false; n];
    for &i in &clean_list {
        is_clean[i] = true;
    }
    let fix_list = (0..n).filter(|&i| !is_clean[i]).collect();

    FixPlan {
        fix_list,
        clean_list,
        chain_length: max_length,
    }
}

/// Exhaustive minimum-fix reference: enumerate every keep-subset and return
/// the smallest fix count together with one maximal keep-set whose points
/// pairwise satisfy the constraint inside the window.
///
/// Refuses series longer than 20 points; the search is exponential.
pub fn brute_force_min_fix(
    ts: &TimeSeries,
    constraint: &SpeedConstraint,
) -> Result<(usize, Vec<usize>)> {
    const MAX_LEN: usize = 20;
    let points = ts.points();
    let n = points.len();
    if n > MAX_LEN {
        return Err(Error::SeriesTooLong {
            len: n,
            max: MAX_LEN,
        });
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }

    // conflicts[i]: bitmask of j that violate the constraint together with i.
    let mut conflicts = vec![0u32; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if !satisfies_unchecked(&points[i], &points[j], constraint) {
                conflicts[i] |= 1 << j;
                conflicts[j] |= 1 << i;
            }
        }
    }

    let mut best_mask = 0u32;
    let mut best_size = 0u32;
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() <= best_size {
            continue;
        }
        let mut rest = mask;
        let mut feasible = true;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if conflicts[i] & mask != 0 {
                feasible = false;
                break;
            }
        }
        if feasible {
            best_size = mask.count_ones();
            best_mask = mask;
        }
    }

    let keep: Vec<usize> = (0..n).filter(|&i| best_mask & (1 << i) != 0).collect();
    Ok((n - keep.len(), keep))
}

/// Apply a plan: every fixed index is interpolated, per dimension, between
/// its nearest kept neighbours at `alpha = (t_f - t_p) / (t_m - t_p)`. A
/// fixed point with kept neighbours on only one side copies that
/// neighbour's values.
pub fn repair_with_plan(ts: &TimeSeries, plan: &FixPlan) -> TimeSeries {
    let points = ts.points();
    let mut repaired: Vec<DataPoint> = points.to_vec();

    for &f in &plan.fix_list {
        let prev_clean = plan
            .clean_list
            .iter()
            .copied()
            .take_while(|&c| c < f)
            .last();
        let next_clean = plan.clean_list.iter().copied().find(|&c| c > f);
        let new_values: Vec<f64> = match (prev_clean, next_clean) {
            (Some(p), Some(m)) => {
                let alpha = (points[f].timestamp - points[p].timestamp)
                    / (points[m].timestamp - points[p].timestamp);
                points[p]
                    .values
                    .iter()
                    .zip(&points[m].values)
                    .map(|(vp, vm)| alpha * (vm - vp) + vp)
                    .collect()
            }
            (Some(p), None) => points[p].values.clone(),
            (None, Some(m)) => points[m].values.clone(),
            (None, None) => continue, // empty clean list only when the series is empty
        };
        repaired[f].values = new_values;
    }

    TimeSeries::from_validated(repaired)
}

/// Batch minimum-fix repair: plan, then interpolate. `O(D * n^2)` time.
pub fn clean(ts: &TimeSeries, constraint: &SpeedConstraint) -> RepairResult {
    let watch = Stopwatch::start();
    let plan = find_fix_plan(ts, constraint);
    let repaired = repair_with_plan(ts, &plan);
    RepairResult::from_output(ts, repaired, watch.elapsed())
}
