//! Univariate monthly series, growth-rate transforms, splitting and lag embeddings.

use alloc::vec::Vec;

use crate::calendar::YearMonth;
use crate::error::{Error, Result};

pub const DEFAULT_PERIOD: usize = 12;

/// Uniformly spaced monthly observations.
///
/// Timestamps are implied by `start` and the position of each value, so the
/// spacing invariant cannot be broken after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    start: YearMonth,
    values: Vec<f64>,
    period: usize,
}

impl TimeSeries {
    pub fn new(start: YearMonth, values: Vec<f64>, period: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if period == 0 {
            return Err(Error::InvalidConfig("period must be positive".into()));
        }
        check_finite(&values)?;
        Ok(Self {
            start,
            values,
            period,
        })
    }

    /// Monthly series with the default period of 12.
    pub fn monthly(start: YearMonth, values: Vec<f64>) -> Result<Self> {
        Self::new(start, values, DEFAULT_PERIOD)
    }

    pub fn start(&self) -> YearMonth {
        self.start
    }

    pub fn end(&self) -> YearMonth {
        self.timestamp(self.values.len() - 1)
    }

    pub fn timestamp(&self, index: usize) -> YearMonth {
        self.start.add_months(index as i64)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Output of a growth transform.
///
/// `start` is the month of the first transformed value; `source_start` is the
/// month of the first raw observation consumed by it, so callers can report
/// either dating convention.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSeries {
    start: YearMonth,
    values: Vec<f64>,
    source_start: YearMonth,
}

impl GrowthSeries {
    /// Builds a series directly from values, e.g. after reading a growth CSV.
    pub fn new(start: YearMonth, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_finite(&values)?;
        Ok(Self {
            start,
            values,
            source_start: start,
        })
    }

    pub fn start(&self) -> YearMonth {
        self.start
    }

    pub fn end(&self) -> YearMonth {
        self.timestamp(self.values.len() - 1)
    }

    pub fn source_start(&self) -> YearMonth {
        self.source_start
    }

    pub fn timestamp(&self, index: usize) -> YearMonth {
        self.start.add_months(index as i64)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of `month`, if it falls inside the series.
    pub fn index_of(&self, month: YearMonth) -> Option<usize> {
        let off = month.months_since(self.start);
        (off >= 0 && (off as usize) < self.values.len()).then_some(off as usize)
    }
}

/// Ordinary annual growth ratio; values are unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveGrowth {
    pub start: YearMonth,
    pub values: Vec<f64>,
    /// `true` where the lagged denominator fell below the instability threshold.
    pub unstable: Vec<bool>,
    pub epsilon: f64,
}

impl NaiveGrowth {
    pub fn any_unstable(&self) -> bool {
        self.unstable.iter().any(|&u| u)
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// `z_t = (y_t - y_{t-s}) / (|y_t| + |y_{t-s}|)` with `s` the series period.
///
/// Every output lies in `[-1, 1]`.
pub fn symmetric_growth(series: &TimeSeries) -> Result<GrowthSeries> {
    let s = series.period;
    let y = series.values();
    if y.len() <= s {
        return Err(Error::TooShort {
            len: y.len(),
            needed: s,
        });
    }
    let mut values = Vec::with_capacity(y.len() - s);
    for t in s..y.len() {
        let denom = libm::fabs(y[t]) + libm::fabs(y[t - s]);
        if denom == 0.0 {
            return Err(Error::ZeroDenominator {
                month: series.timestamp(t),
            });
        }
        // Clamp guards the last ulp when |y_t| dwarfs |y_{t-s}|.
        values.push(((y[t] - y[t - s]) / denom).clamp(-1.0, 1.0));
    }
    Ok(GrowthSeries {
        start: series.timestamp(s),
        values,
        source_start: series.start,
    })
}

/// `(y_t - y_{t-s}) / y_{t-s}`, flagging denominators with magnitude below
/// `epsilon`. The default threshold is `1e-9` times the mean absolute value.
pub fn naive_growth(series: &TimeSeries, epsilon: Option<f64>) -> Result<NaiveGrowth> {
    let s = series.period;
    let y = series.values();
    if y.len() <= s {
        return Err(Error::TooShort {
            len: y.len(),
            needed: s,
        });
    }
    let epsilon = epsilon.unwrap_or_else(|| {
        1e-9 * y.iter().map(|v| libm::fabs(*v)).sum::<f64>() / y.len() as f64
    });
    let (values, unstable) = (s..y.len())
        .map(|t| {
            let base = y[t - s];
            ((y[t] - base) / base, libm::fabs(base) < epsilon)
        })
        .unzip();
    Ok(NaiveGrowth {
        start: series.timestamp(s),
        values,
        unstable,
        epsilon,
    })
}

/// Splits so that `left` ends the month before `boundary` and `right` starts at it.
pub fn split_at(series: &GrowthSeries, boundary: YearMonth) -> Result<(GrowthSeries, GrowthSeries)> {
    let outside = || Error::BoundaryOutsideSpan {
        boundary,
        first: series.start(),
        last: series.end(),
    };
    let idx = series.index_of(boundary).ok_or_else(outside)?;
    if idx == 0 {
        return Err(outside());
    }
    let left = GrowthSeries {
        start: series.start,
        values: series.values[..idx].to_vec(),
        source_start: series.source_start,
    };
    let right = GrowthSeries {
        start: boundary,
        values: series.values[idx..].to_vec(),
        source_start: series.source_start,
    };
    Ok((left, right))
}

/// Response plus lagged predictors over the rows where every lag is observed.
///
/// Stores the source series once; column `j` is the source shifted by `j`, so
/// `lag(j)[i] == source[i + p - j]` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LagEmbedding {
    source: Vec<f64>,
    p: usize,
    start: Option<YearMonth>,
}

impl LagEmbedding {
    pub fn from_values(values: &[f64], p: usize) -> Result<Self> {
        if p == 0 || p >= values.len() {
            return Err(Error::InvalidLag {
                p,
                len: values.len(),
            });
        }
        check_finite(values)?;
        Ok(Self {
            source: values.to_vec(),
            p,
            start: None,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.source.len() - self.p
    }

    pub fn response(&self) -> &[f64] {
        &self.source[self.p..]
    }

    /// Lag-`j` predictor column, `1 <= j <= p`.
    pub fn lag(&self, j: usize) -> &[f64] {
        assert!(j >= 1 && j <= self.p, "lag {j} outside 1..={}", self.p);
        &self.source[self.p - j..self.source.len() - j]
    }

    pub fn source(&self) -> &[f64] {
        &self.source
    }

    /// Month of response row `i`, when the embedding came from a dated series.
    pub fn row_timestamp(&self, i: usize) -> Option<YearMonth> {
        self.start.map(|s| s.add_months(i as i64))
    }

    /// Row-major predictor matrix (`rows x p`), column `j - 1` holding lag `j`.
    pub fn predictor_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|i| (1..=self.p).map(|j| self.lag(j)[i]).collect())
            .collect()
    }
}

pub fn embed_lags(series: &GrowthSeries, p: usize) -> Result<LagEmbedding> {
    let mut e = LagEmbedding::from_values(series.values(), p)?;
    e.start = Some(series.timestamp(p));
    Ok(e)
}
