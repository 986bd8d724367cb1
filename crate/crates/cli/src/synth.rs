//! Seeded synthetic series for benchmarks and evaluation fixtures.

use speedclean::rng::SplitMix64;
use speedclean::{DataPoint, TimeSeries};

/// Bounded random walk with unit timestamps. Every step's Euclidean speed is
/// drawn uniformly from `[0.3 * max_speed, max_speed]`, and each dimension
/// reflects at `±bound`, which can only shorten a step. The walk therefore
/// satisfies any constraint with `s_max >= max_speed` at every pair.
pub fn bounded_walk(n: usize, dims: usize, seed: u64, max_speed: f64, bound: f64) -> TimeSeries {
    two_regime_walk(n, dims, seed, max_speed, max_speed, n, bound)
}

/// Bounded random walk whose step-speed scale switches from `speed_a` to
/// `speed_b` at point index `switch_at`.
pub fn two_regime_walk(
    n: usize,
    dims: usize,
    seed: u64,
    speed_a: f64,
    speed_b: f64,
    switch_at: usize,
    bound: f64,
) -> TimeSeries {
    assert!(dims >= 1 && positive(speed_a) && positive(speed_b) && bound > 0.0);
    let mut rng = SplitMix64::new(seed);
    let mut position = vec![0.0f64; dims];
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            let cap = if i < switch_at { speed_a } else { speed_b };
            step(&mut rng, &mut position, cap, bound);
        }
        points.push(DataPoint::new(i as f64, position.clone()));
    }
    TimeSeries::new(points).expect("constructed walk is valid")
}

fn positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

fn step(rng: &mut SplitMix64, position: &mut [f64], speed_cap: f64, bound: f64) {
    let direction: Vec<f64> = position.iter().map(|_| rng.uniform(-1.0, 1.0)).collect();
    let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    let magnitude = rng.uniform(0.3 * speed_cap, speed_cap);
    for (p, d) in position.iter_mut().zip(&direction) {
        if norm > 0.0 {
            *p += d / norm * magnitude;
        }
        // Reflect into [-bound, bound]; steps are far smaller than the
        // bound, so one reflection suffices.
        if *p > bound {
            *p = 2.0 * bound - *p;
        } else if *p < -bound {
            *p = -2.0 * bound - *p;
        }
    }
}
