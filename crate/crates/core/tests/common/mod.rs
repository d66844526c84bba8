#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize, sd: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let v: f64 = StandardNormal.sample(rng);
            sd * v
        })
        .collect()
}

pub fn student_t(rng: &mut ChaCha8Rng, n: usize, df: f64) -> Vec<f64> {
    let t = StudentT::new(df).unwrap();
    (0..n).map(|_| t.sample(rng)).collect()
}

pub fn uniform(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// SETAR(2; 1, 1) with threshold 0 on the lag-1 value.
pub fn setar(seed: u64, n: usize, low: f64, high: f64, sd: f64) -> Vec<f64> {
    let mut r = rng(seed);
    let burn = 100;
    let eps = gaussian(&mut r, n + burn, sd);
    let mut z = vec![0.0; n + burn];
    for t in 1..n + burn {
        let prev = z[t - 1];
        z[t] = if prev <= 0.0 { low * prev } else { high * prev } + eps[t];
    }
    z.split_off(burn)
}

/// Fractional noise via the truncated MA expansion with a burn-in segment.
pub fn fractional_noise(seed: u64, n: usize, d: f64) -> Vec<f64> {
    let mut r = rng(seed);
    let burn = 500;
    let eps = gaussian(&mut r, n + burn, 1.0);
    let x = tsmars_core::arfima::integrate_fractional(&eps, d).unwrap();
    x[burn..].to_vec()
}
