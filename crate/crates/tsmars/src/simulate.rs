//! Seeded generators for synthetic test series.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use tsmars_core::arfima::{ar_is_stationary, integrate_fractional};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Process {
    /// Two-regime threshold AR(1) on the lag-1 value: coefficient `low` when
    /// `z[t-1] <= threshold`, `high` otherwise.
    Setar { threshold: f64, low: f64, high: f64 },
    /// `(1 - B)^-d` applied to Gaussian noise.
    Arfima { d: f64 },
    /// AR on an arbitrary lag set.
    SubsetAr { lags: Vec<usize>, coefs: Vec<f64> },
    WhiteNoise,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSpec {
    pub process: Process,
    pub n: usize,
    pub noise_sd: f64,
    /// Leading values generated and discarded.
    pub burn_in: usize,
    pub seed: u64,
}

impl SimSpec {
    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::usage("n must be positive"));
        }
        if !(self.noise_sd.is_finite() && self.noise_sd > 0.0) {
            return Err(Error::usage("noise_sd must be positive"));
        }
        match &self.process {
            Process::Setar { threshold, low, high } => {
                if !threshold.is_finite() || !(low.abs() < 1.0 && high.abs() < 1.0) {
                    return Err(Error::usage("SETAR regime coefficients must lie in (-1, 1)"));
                }
            }
            Process::Arfima { d } => {
                if !(0.0..1.0).contains(d) {
                    return Err(Error::usage(format!("d = {d} outside [0, 1)")));
                }
            }
            Process::SubsetAr { lags, coefs } => {
                if lags.is_empty() || lags.len() != coefs.len() || lags.contains(&0) {
                    return Err(Error::usage("subset AR needs one coefficient per positive lag"));
                }
                let order = *lags.iter().max().expect("non-empty");
                let mut phi = vec![0.0; order];
                for (l, c) in lags.iter().zip(coefs) {
                    phi[l - 1] += c;
                }
                if !ar_is_stationary(&phi) {
                    return Err(Error::usage("AR coefficients are explosive or on the unit circle"));
                }
            }
            Process::WhiteNoise => {}
        }
        Ok(())
    }
}

pub fn simulate(spec: &SimSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = Normal::new(0.0, spec.noise_sd).expect("positive sd");
    let total = spec.n + spec.burn_in;
    let eps: Vec<f64> = (0..total).map(|_| normal.sample(&mut rng)).collect();
    let z = match &spec.process {
        Process::WhiteNoise => eps,
        Process::Arfima { d } => integrate_fractional(&eps, *d)?,
        Process::Setar { threshold, low, high } => {
            let mut z = eps;
            for t in 1..total {
                let prev = z[t - 1];
                z[t] += if prev <= *threshold { low } else { high } * prev;
            }
            z
        }
        Process::SubsetAr { lags, coefs } => {
            let mut z = eps;
            for t in 0..total {
                let mut v = z[t];
                for (l, c) in lags.iter().zip(coefs) {
                    if t >= *l {
                        v += c * z[t - l];
                    }
                }
                z[t] = v;
            }
            z
        }
    };
    Ok(z[spec.burn_in..].to_vec())
}
