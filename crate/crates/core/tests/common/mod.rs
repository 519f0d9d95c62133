#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zbsplinet::bayes::{uniform_grid, DiscreteDensity, GridFunction, ZeroPolicy};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bin centres 2, 7, …, 92 of 19 five-year age groups on [0, 95].
pub fn age_midpoints() -> Vec<f64> {
    (0..19).map(|i| 2.0 + 5.0 * i as f64).collect()
}

/// A smooth positive function: exp of a random trigonometric polynomial on [a, b].
pub fn random_log_density(rng: &mut ChaCha8Rng, a: f64, b: f64) -> impl Fn(f64) -> f64 {
    let coeffs: Vec<(f64, f64)> = (0..4)
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    move |x: f64| {
        let t = std::f64::consts::PI * (x - a) / (b - a);
        coeffs
            .iter()
            .enumerate()
            .map(|(m, (s, c))| {
                let f = (m + 1) as f64;
                (s * (f * t).sin() + c * (f * t).cos()) / f
            })
            .sum::<f64>()
            .exp()
    }
}

/// Random 19-bin age histogram.
pub fn random_histogram(rng: &mut ChaCha8Rng) -> DiscreteDensity {
    let f = random_log_density(rng, 0.0, 95.0);
    let xs = age_midpoints();
    let freqs = xs.iter().map(|&x| f(x)).collect();
    DiscreteDensity::new(xs, freqs, ZeroPolicy::Reject).unwrap()
}

/// Random positive density sampled on `n` points of [a, b].
pub fn random_grid_density(rng: &mut ChaCha8Rng, a: f64, b: f64, n: usize) -> GridFunction {
    let f = random_log_density(rng, a, b);
    let xs = uniform_grid(a, b, n).unwrap();
    let values = xs.iter().map(|&x| f(x)).collect();
    GridFunction::new(xs, values).unwrap()
}

/// Strictly increasing random inner knots in (a, b), kept apart by at least a tenth of the mean gap.
pub fn random_inner_knots(rng: &mut ChaCha8Rng, a: f64, b: f64, g: usize) -> Vec<f64> {
    let gaps: Vec<f64> = (0..=g).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = gaps.iter().sum();
    let mut acc = a;
    gaps[..g]
        .iter()
        .map(|gap| {
            acc += gap / total * (b - a);
            acc
        })
        .collect()
}
