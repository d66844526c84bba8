//! Residual diagnostics: sample autocorrelation, Ljung-Box portmanteau
//! statistics, Jarque-Bera normality and squared-residual screening.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::special::chi_square_sf;

/// Lag checkpoints of the default Ljung-Box report.
pub const DEFAULT_LB_LAGS: [usize; 4] = [6, 12, 18, 24];
/// Number of trailing autocorrelations reported on each Ljung-Box row.
pub const LB_TRAILING: usize = 6;
/// Minimum length accepted by [`normality_test`].
pub const MIN_NORMALITY_LEN: usize = 20;

/// Shape of the error band attached to an ACF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BandKind {
    /// `2 / sqrt(n)` at every lag.
    #[default]
    Flat,
    /// `2 sqrt((1 + 2 sum_{j<k} r_j^2) / n)`.
    Bartlett,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AcfResult {
    /// `r[k - 1]` is the autocorrelation at lag `k`.
    pub r: Vec<f64>,
    /// Flat two-standard-error limit `2 / sqrt(n)`.
    pub se_band: f64,
    pub n: usize,
}

impl AcfResult {
    pub fn max_lag(&self) -> usize {
        self.r.len()
    }

    pub fn lags(&self) -> impl Iterator<Item = usize> + '_ {
        1..=self.r.len()
    }

    /// Band half-width at each lag.
    pub fn band(&self, kind: BandKind) -> Vec<f64> {
        match kind {
            BandKind::Flat => alloc::vec![self.se_band; self.r.len()],
            BandKind::Bartlett => {
                let mut acc = 1.0;
                self.r
                    .iter()
                    .map(|r| {
                        let b = 2.0 * libm::sqrt(acc / self.n as f64);
                        acc += 2.0 * r * r;
                        b
                    })
                    .collect()
            }
        }
    }

    /// Fraction of lags whose autocorrelation lies inside the band.
    pub fn fraction_inside(&self, kind: BandKind) -> f64 {
        if self.r.is_empty() {
            return 1.0;
        }
        let inside = self.r.iter().zip(self.band(kind)).filter(|(r, b)| r.abs() <= *b).count();
        inside as f64 / self.r.len() as f64
    }
}

fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Sample autocorrelations at lags `1..=max_lag`.
pub fn acf(series: &[f64], max_lag: usize) -> Result<AcfResult> {
    let n = series.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n <= max_lag {
        return Err(Error::TooShort { len: n, needed: max_lag + 1 });
    }
    check_finite(series)?;
    let mean = series.iter().sum::<f64>() / n as f64;
    let c: Vec<f64> = series.iter().map(|v| v - mean).collect();
    let denom: f64 = c.iter().map(|v| v * v).sum();
    if !(denom > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let r = (1..=max_lag)
        .map(|k| {
            let num: f64 = c[k..].iter().zip(&c[..n - k]).map(|(a, b)| a * b).sum();
            num / denom
        })
        .collect();
    Ok(AcfResult {
        r,
        se_band: 2.0 / libm::sqrt(n as f64),
        n,
    })
}

/// Degrees of freedom used for the chi-square reference distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DfMode {
    /// `df = L`.
    #[default]
    LagAsDf,
    /// `df = L - fitted`, floored at 1.
    Corrected(usize),
}

impl DfMode {
    fn df(self, lag: usize) -> usize {
        match self {
            DfMode::LagAsDf => lag,
            DfMode::Corrected(k) => lag.saturating_sub(k).max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LjungBoxRow {
    pub lag: usize,
    pub q_stat: f64,
    pub df: usize,
    pub p_value: f64,
    /// Autocorrelations at lags `lag - 5 ..= lag` (fewer when `lag < 6`).
    pub r_values: Vec<f64>,
}

/// `Q(L) = n (n + 2) sum_{k=1}^{L} r_k^2 / (n - k)` for each requested `L`.
pub fn ljung_box_from_acf(acf: &AcfResult, lags: &[usize], df_mode: DfMode) -> Result<Vec<LjungBoxRow>> {
    let n = acf.n as f64;
    lags.iter()
        .map(|&lag| {
            if lag == 0 {
                return Err(Error::InvalidConfig("Ljung-Box lag must be positive".into()));
            }
            if lag > acf.max_lag() {
                return Err(Error::TooShort { len: acf.n, needed: lag + 1 });
            }
            let sum: f64 = acf.r[..lag]
                .iter()
                .enumerate()
                .map(|(i, r)| r * r / (n - (i + 1) as f64))
                .sum();
            let q = n * (n + 2.0) * sum;
            let df = df_mode.df(lag);
            Ok(LjungBoxRow {
                lag,
                q_stat: q,
                df,
                p_value: chi_square_sf(q, df as f64).clamp(0.0, 1.0),
                r_values: acf.r[lag.saturating_sub(LB_TRAILING)..lag].to_vec(),
            })
        })
        .collect()
}

pub fn ljung_box(residuals: &[f64], lags: &[usize], df_mode: DfMode) -> Result<Vec<LjungBoxRow>> {
    let max_lag = lags.iter().copied().max().unwrap_or(0);
    ljung_box_from_acf(&acf(residuals, max_lag)?, lags, df_mode)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormalityResult {
    pub statistic: f64,
    pub p_value: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

/// Jarque-Bera test, `n (S^2 / 6 + K^2 / 24)` against chi-square with 2 df.
pub fn normality_test(residuals: &[f64]) -> Result<NormalityResult> {
    let n = residuals.len();
    if n < MIN_NORMALITY_LEN {
        return Err(Error::TooShort { len: n, needed: MIN_NORMALITY_LEN });
    }
    check_finite(residuals)?;
    let nf = n as f64;
    let mean = residuals.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in residuals {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    // Relative to the scale of the data, a tiny second moment is rounding noise.
    let scale = residuals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if !(m2 > 0.0) || libm::sqrt(m2) <= 1e-12 * scale {
        return Err(Error::ZeroVariance);
    }
    let skewness = m3 / libm::pow(m2, 1.5);
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;
    let statistic = nf * (skewness * skewness / 6.0 + excess_kurtosis * excess_kurtosis / 24.0);
    Ok(NormalityResult {
        statistic,
        p_value: libm::exp(-statistic / 2.0).clamp(0.0, 1.0),
        skewness,
        excess_kurtosis,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HeteroCheck {
    pub acf: AcfResult,
    /// One row for each lag `1..=max_lag`.
    pub ljung_box: Vec<LjungBoxRow>,
}

/// ACF and Ljung-Box statistics of the centred squared residuals.
pub fn hetero_check(residuals: &[f64], max_lag: usize) -> Result<HeteroCheck> {
    let sq: Vec<f64> = residuals.iter().map(|v| v * v).collect();
    let acf = acf(&sq, max_lag)?;
    let lags: Vec<usize> = (1..=max_lag).collect();
    let ljung_box = ljung_box_from_acf(&acf, &lags, DfMode::LagAsDf)?;
    Ok(HeteroCheck { acf, ljung_box })
}
