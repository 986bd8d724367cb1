//! Error injection, repair metrics, and the EWMA smoothing baseline.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::rng::SplitMix64;
use crate::series::{distance_unchecked, TimeSeries};

/// How injected errors are distributed over dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorPattern {
    /// Every dimension of each chosen point is corrupted at once.
    Together,
    /// The error budget is split evenly across dimensions; each dimension
    /// picks its own points and only that dimension is corrupted.
    Separate,
}

/// Specification of a synthetic corruption pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSpec {
    /// Fraction of points to corrupt, in [0, 1]. The number of errors is
    /// `floor(rate * n)`.
    pub rate: f64,
    pub pattern: ErrorPattern,
    pub seed: u64,
    /// Per-dimension (min, max) range replacement values are drawn from;
    /// derived from the series itself when absent.
    pub value_range: Option<Vec<(f64, f64)>>,
}

impl ErrorSpec {
    pub fn new(rate: f64, pattern: ErrorPattern, seed: u64) -> Self {
        ErrorSpec {
            rate,
            pattern,
            seed,
            value_range: None,
        }
    }
}

/// A corrupted copy of a series plus the `(index, dimension)` pairs that
/// were overwritten, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct Injection {
    pub dirty: TimeSeries,
    pub injected: Vec<(usize, usize)>,
}

/// Corrupt a series by replacing values with uniform draws from the
/// per-dimension value range. Deterministic for a given spec; timestamps,
/// length, and dimension are never touched.
pub fn inject_errors(truth: &TimeSeries, spec: &ErrorSpec) -> Result<Injection> {
    if !(0.0..=1.0).contains(&spec.rate) {
        return Err(Error::InvalidParameter {
            name: "rate",
            reason: "must be in [0, 1]",
        });
    }
    if truth.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = truth.len();
    let dims = truth.dimension();

    let ranges: Vec<(f64, f64)> = match &spec.value_range {
        Some(ranges) => {
            if ranges.len() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    found: ranges.len(),
                });
            }
            for &(lo, hi) in ranges {
                if lo > hi {
                    return Err(Error::InvalidParameter {
                        name: "value_range",
                        reason: "min exceeds max",
                    });
                }
            }
            ranges.clone()
        }
        None => value_ranges(truth),
    };

    let mut rng = SplitMix64::new(spec.seed);
    let budget = (spec.rate * n as f64) as usize;
    let mut points = truth.points().to_vec();
    let mut injected: Vec<(usize, usize)> = Vec::new();

    match spec.pattern {
        ErrorPattern::Together => {
            for index in sample_indices(&mut rng, n, budget) {
                for (dim, &(lo, hi)) in ranges.iter().enumerate() {
                    points[index].values[dim] = rng.uniform(lo, hi);
                    injected.push((index, dim));
                }
            }
        }
        ErrorPattern::Separate => {
            let base = budget / dims;
            let extra = budget % dims;
            for (dim, &(lo, hi)) in ranges.iter().enumerate() {
                let share = base + usize::from(dim < extra);
                for index in sample_indices(&mut rng, n, share) {
                    points[index].values[dim] = rng.uniform(lo, hi);
                    injected.push((index, dim));
                }
            }
        }
    }

    injected.sort_unstable();
    Ok(Injection {
        dirty: TimeSeries::from_validated(points),
        injected,
    })
}

/// Per-dimension (min, max) of the observed values.
pub fn value_ranges(ts: &TimeSeries) -> Vec<(f64, f64)> {
    let dims = ts.dimension();
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); dims];
    for point in ts.iter() {
        for (dim, &v) in point.values.iter().enumerate() {
            let (lo, hi) = &mut ranges[dim];
            *lo = lo.min(v);
            *hi = hi.max(v);
        }
    }
    ranges
}

/// `k` distinct indices out of `[0, n)`, in draw order (then sorted by the
/// caller if needed). Partial Fisher-Yates on the index vector.
fn sample_indices(rng: &mut SplitMix64, n: usize, k: usize) -> Vec<usize> {
    debug_assert!(k <= n);
    let mut pool: Vec<usize> = (0..n).collect();
    let mut picked = Vec::with_capacity(k);
    for step in 0..k {
        let j = step + rng.index(n - step);
        pool.swap(step, j);
        picked.push(pool[step]);
    }
    picked.sort_unstable();
    picked
}

fn check_aligned(a: &TimeSeries, b: &TimeSeries) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            found: b.dimension(),
        });
    }
    Ok(())
}

/// Root-mean-square of the per-point Euclidean distances between two
/// aligned series.
pub fn rmse(a: &TimeSeries, b: &TimeSeries) -> Result<f64> {
    check_aligned(a, b)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let d = distance_unchecked(x, y);
            d * d
        })
        .sum();
    Ok(math::sqrt(sum / a.len() as f64))
}

/// Mean per-point Euclidean distance between two aligned series; zero
/// exactly when nothing changed.
pub fn repair_distance(repaired: &TimeSeries, original: &TimeSeries) -> Result<f64> {
    check_aligned(repaired, original)?;
    if repaired.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = repaired
        .iter()
        .zip(original.iter())
        .map(|(x, y)| distance_unchecked(x, y))
        .sum();
    Ok(sum / repaired.len() as f64)
}

/// Count and fraction of points whose values differ between two aligned
/// series.
pub fn repair_number(repaired: &TimeSeries, original: &TimeSeries) -> Result<(usize, f64)> {
    check_aligned(repaired, original)?;
    let count = repaired
        .iter()
        .zip(original.iter())
        .filter(|(x, y)| x.values != y.values)
        .count();
    let fraction = if repaired.is_empty() {
        0.0
    } else {
        count as f64 / repaired.len() as f64
    };
    Ok((count, fraction))
}

/// Exponentially weighted moving average baseline, seeded with the first
/// observation: `y_1 = x_1`, `y_i = alpha * x_i + (1 - alpha) * y_{i-1}`,
/// per dimension. Comparison baseline only; it modifies almost every point.
pub fn ewma(ts: &TimeSeries, alpha: f64) -> Result<TimeSeries> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "must be in (0, 1]",
        });
    }
    if ts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut points = ts.points().to_vec();
    for i in 1..points.len() {
        for dim in 0..ts.dimension() {
            let prev = points[i - 1].values[dim];
            let v = &mut points[i].values[dim];
            *v = alpha * *v + (1.0 - alpha) * prev;
        }
    }
    Ok(TimeSeries::from_validated(points))
}
