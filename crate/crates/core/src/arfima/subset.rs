use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::timeseries::LagEmbedding;

/// Least-squares autoregression on an arbitrary set of lags.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubsetArModel {
    pub lags: Vec<usize>,
    pub coefficients: Vec<f64>,
    pub intercept: Option<f64>,
    pub rss: f64,
    pub n: usize,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub residuals: Vec<f64>,
}

impl SubsetArModel {
    pub fn max_lag(&self) -> usize {
        self.lags.iter().copied().max().unwrap_or(0)
    }

    /// Residuals over the rows where every lag is observed.
    pub fn residuals_on(&self, values: &[f64]) -> Result<Vec<f64>> {
        let e = LagEmbedding::from_values(values, self.max_lag())?;
        let mut fit = vec![self.intercept.unwrap_or(0.0); e.rows()];
        for (&lag, &c) in self.lags.iter().zip(&self.coefficients) {
            for (f, x) in fit.iter_mut().zip(e.lag(lag)) {
                *f += c * x;
            }
        }
        Ok(e.response().iter().zip(fit).map(|(y, f)| y - f).collect())
    }
}

pub fn fit_subset_ar(values: &[f64], lags: &[usize], include_intercept: bool) -> Result<SubsetArModel> {
    if lags.is_empty() {
        return Err(Error::InvalidConfig("lag set is empty".into()));
    }
    if lags.contains(&0) {
        return Err(Error::InvalidConfig("lags must be positive".into()));
    }
    for (i, l) in lags.iter().enumerate() {
        if lags[..i].contains(l) {
            return Err(Error::InvalidConfig(alloc::format!("lag {l} repeated")));
        }
    }
    let max_lag = *lags.iter().max().expect("non-empty");
    let e = LagEmbedding::from_values(values, max_lag)?;

    let offset = include_intercept as usize;
    let mut columns = Vec::with_capacity(lags.len() + offset);
    if include_intercept {
        columns.push(vec![1.0; e.rows()]);
    }
    columns.extend(lags.iter().map(|&l| e.lag(l).to_vec()));
    let ls = least_squares(&columns, e.response());
    if !ls.dependent.is_empty() {
        let lags = ls
            .dependent
            .iter()
            .filter(|&&c| c >= offset)
            .map(|&c| lags[c - offset])
            .collect();
        return Err(Error::RankDeficient { lags });
    }
    Ok(SubsetArModel {
        lags: lags.to_vec(),
        coefficients: ls.coefficients[offset..].to_vec(),
        intercept: include_intercept.then(|| ls.coefficients[0]),
        rss: ls.rss,
        n: e.rows(),
        residuals: ls.residuals,
    })
}

/// Whether `1 - sum_i phi_i z^i` (with `phi[i]` the lag `i + 1` coefficient)
/// has all roots outside the unit circle, by the step-down recursion.
pub fn ar_is_stationary(phi: &[f64]) -> bool {
    let mut a = phi.to_vec();
    while let Some(&r) = a.last() {
        if !(libm::fabs(r) < 1.0) {
            return false;
        }
        let m = a.len();
        let denom = 1.0 - r * r;
        let prev: Vec<f64> = (0..m - 1).map(|j| (a[j] + r * a[m - 2 - j]) / denom).collect();
        a = prev;
    }
    true
}
