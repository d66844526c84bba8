use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Coefficients `pi_0..=pi_len` of `(1 - B)^d` for any real `d`:
/// `pi_0 = 1`, `pi_k = pi_{k-1} (k - 1 - d) / k`.
pub fn expansion_weights(d: f64, len: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(len + 1);
    w.push(1.0);
    for k in 1..=len {
        let prev = w[k - 1];
        w.push(prev * (k as f64 - 1.0 - d) / k as f64);
    }
    w
}

fn check_order(d: f64) -> Result<()> {
    if (0.0..=1.0).contains(&d) {
        Ok(())
    } else {
        Err(Error::OrderOutOfRange(d))
    }
}

/// Fractional differencing weights for `0 <= d <= 1`, truncated at lag `len`.
pub fn fracdiff_coeffs(d: f64, len: usize) -> Result<Vec<f64>> {
    check_order(d)?;
    Ok(expansion_weights(d, len))
}

/// Expanding-window convolution: `out_t = sum_{k=0}^{t} w_k x_{t-k}`.
pub fn apply_weights(values: &[f64], weights: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    for (t, o) in out.iter_mut().enumerate() {
        let kmax = t.min(weights.len() - 1);
        let mut s = 0.0;
        for k in 0..=kmax {
            s += weights[k] * values[t - k];
        }
        *o = s;
    }
    out
}

/// `(1 - B)^d x` with no pre-sample values; output has the input's length.
pub fn apply_fracdiff(values: &[f64], d: f64) -> Result<Vec<f64>> {
    check_order(d)?;
    let w = expansion_weights(d, values.len().saturating_sub(1));
    Ok(apply_weights(values, &w))
}

/// `(1 - B)^{-d} x`, the inverse of [`apply_fracdiff`] under the same truncation.
pub fn integrate_fractional(values: &[f64], d: f64) -> Result<Vec<f64>> {
    check_order(d)?;
    let w = expansion_weights(-d, values.len().saturating_sub(1));
    Ok(apply_weights(values, &w))
}
