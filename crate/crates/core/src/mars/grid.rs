//! Runs the forward/backward fit over a grid of `(p, k_max)` settings.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{forward_pass, prune_backward, MarsConfig, MarsModel, DEFAULT_GCV_PENALTY};
use crate::anova::{decompose, AnovaDecomposition};
use crate::error::{Error, Result};
use crate::timeseries::{embed_lags, GrowthSeries};

/// How the maximum number of non-constant basis functions is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLimit {
    /// Same as the number of lagged predictors.
    EqualToP,
    Fixed(usize),
}

impl BasisLimit {
    pub fn resolve(self, p: usize) -> usize {
        match self {
            BasisLimit::EqualToP => p,
            BasisLimit::Fixed(m) => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub lags: Vec<usize>,
    pub k_values: Vec<usize>,
    pub gcv_penalty: f64,
    pub basis_limit: BasisLimit,
    pub allow_high_kmax: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            lags: vec![6, 12, 24, 36, 48, 60],
            k_values: vec![1, 2],
            gcv_penalty: DEFAULT_GCV_PENALTY,
            basis_limit: BasisLimit::EqualToP,
            allow_high_kmax: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowOutcome {
    Fitted {
        rss: f64,
        gcv: f64,
        anova: AnovaDecomposition,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub p: usize,
    pub k_max: usize,
    pub outcome: RowOutcome,
}

impl FitRow {
    pub fn gcv(&self) -> Option<f64> {
        match &self.outcome {
            RowOutcome::Fitted { gcv, .. } => Some(*gcv),
            RowOutcome::Skipped { .. } => None,
        }
    }
}

/// One row per grid cell, in `p`-major order, plus the index of the minimum-GCV row.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub rows: Vec<FitRow>,
    pub best: usize,
}

/// Fits every `(p, k_max)` pair and returns the minimum-GCV model.
///
/// Cells whose embedding is too short are reported as skipped; if every cell
/// is skipped the call fails.
pub fn fit_grid(series: &GrowthSeries, config: &GridConfig) -> Result<(MarsModel, FitReport)> {
    if config.lags.is_empty() || config.k_values.is_empty() {
        return Err(Error::InvalidConfig("empty lag or interaction grid".into()));
    }
    for &k in &config.k_values {
        let mut c = MarsConfig::new(k, 1);
        c.allow_high_kmax = config.allow_high_kmax;
        c.gcv_penalty = config.gcv_penalty;
        c.validate()?;
    }
    if config.lags.contains(&0) {
        return Err(Error::InvalidConfig("lags must be positive".into()));
    }

    let mut rows = Vec::with_capacity(config.lags.len() * config.k_values.len());
    let mut best: Option<(usize, MarsModel)> = None;
    for &p in &config.lags {
        for &k_max in &config.k_values {
            let cfg = MarsConfig {
                k_max,
                basis_limit: config.basis_limit.resolve(p),
                gcv_penalty: config.gcv_penalty,
                allow_high_kmax: config.allow_high_kmax,
            };
            let fitted = embed_lags(series, p).and_then(|e| {
                let fwd = forward_pass(&e, &cfg)?;
                let (model, _) = prune_backward(&fwd.model, &e);
                let anova = decompose(&model, &e);
                Ok((model, anova))
            });
            let outcome = match fitted {
                Ok((model, anova)) => {
                    let outcome = RowOutcome::Fitted {
                        rss: model.rss,
                        gcv: model.gcv,
                        anova,
                    };
                    if best.as_ref().is_none_or(|(_, b)| model.gcv < b.gcv) {
                        best = Some((rows.len(), model));
                    }
                    outcome
                }
                Err(Error::InvalidConfig(msg)) => return Err(Error::InvalidConfig(msg)),
                Err(e) => RowOutcome::Skipped {
                    reason: e.to_string(),
                },
            };
            rows.push(FitRow { p, k_max, outcome });
        }
    }
    let (best_idx, model) = best.ok_or(Error::TooShort {
        len: series.len(),
        needed: config.lags.iter().copied().min().unwrap_or(0) + 1,
    })?;
    Ok((
        model,
        FitReport {
            rows,
            best: best_idx,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::YearMonth;

    fn series(n: usize) -> GrowthSeries {
        let v: Vec<f64> = (0..n)
            .map(|i| 0.5 * libm::sin(i as f64 * 0.9) + 0.2 * libm::sin(i as f64 * 0.13))
            .collect();
        GrowthSeries::new(YearMonth::new(1971, 1).unwrap(), v).unwrap()
    }

    #[test]
    fn single_cell_grid() {
        let cfg = GridConfig {
            lags: vec![3],
            k_values: vec![1],
            ..GridConfig::default()
        };
        let (best, report) = fit_grid(&series(80), &cfg).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.best, 0);
        assert_eq!(report.rows[0].gcv(), Some(best.gcv));
    }

    #[test]
    fn short_series_rows_are_skipped() {
        let cfg = GridConfig {
            lags: vec![2, 50],
            k_values: vec![1, 2],
            ..GridConfig::default()
        };
        let (_, report) = fit_grid(&series(40), &cfg).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(matches!(report.rows[2].outcome, RowOutcome::Skipped { .. }));
        assert!(report.best < 2);

        let cfg = GridConfig {
            lags: vec![50],
            ..GridConfig::default()
        };
        assert!(matches!(fit_grid(&series(40), &cfg), Err(Error::TooShort { .. })));
    }

    #[test]
    fn kmax_cap_is_fatal() {
        let cfg = GridConfig {
            lags: vec![2],
            k_values: vec![4],
            ..GridConfig::default()
        };
        assert!(matches!(fit_grid(&series(40), &cfg), Err(Error::InvalidConfig(_))));
    }
}
