//! Pipeline configuration: a flat TOML document whose keys mirror the
//! command-line flags. Flags given on the command line take precedence.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tsmars_core::diagnostics::{BandKind, DfMode};
use tsmars_core::mars::{BasisLimit, GridConfig, DEFAULT_GCV_PENALTY, KMAX_CAP};
use tsmars_core::YearMonth;

use crate::csv_io::ColumnMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisLimitSetting {
    /// Only `"p"` is accepted: the limit equals the number of lags.
    Rule(String),
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessKind {
    Setar,
    Arfima,
    Ar,
    WhiteNoise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    pub date_column: String,
    pub value_column: String,
    pub date_format: String,
    pub period: usize,
    pub split: Option<YearMonth>,
    pub out_dir: PathBuf,

    pub lags: Vec<usize>,
    pub kmax: Vec<usize>,
    pub penalty: f64,
    pub basis_limit: BasisLimitSetting,
    pub allow_high_kmax: bool,

    pub p_max: usize,
    pub q_max: usize,
    pub min_len: usize,

    pub ar_lags: Vec<usize>,
    pub intercept: bool,

    pub diag_lags: Vec<usize>,
    pub acf_lags: usize,
    pub band: BandKind,
    /// Fitted parameters subtracted from the Ljung-Box degrees of freedom; 0 keeps df = lag.
    pub df_correction: usize,

    pub seed: Option<u64>,
    pub process: ProcessKind,
    pub n: usize,
    pub noise_sd: f64,
    pub burn_in: usize,
    pub threshold: f64,
    pub setar_low: f64,
    pub setar_high: f64,
    pub d: f64,
    pub ar_coefs: Vec<f64>,
    pub start: YearMonth,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let grid = GridConfig::default();
        Self {
            input: None,
            date_column: "date".into(),
            value_column: "value".into(),
            date_format: "%Y-%m".into(),
            period: 12,
            split: None,
            out_dir: PathBuf::from("."),
            lags: grid.lags,
            kmax: grid.k_values,
            penalty: DEFAULT_GCV_PENALTY,
            basis_limit: BasisLimitSetting::Rule("p".into()),
            allow_high_kmax: false,
            p_max: 3,
            q_max: 3,
            min_len: tsmars_core::arfima::DEFAULT_MIN_LEN,
            ar_lags: Vec::new(),
            intercept: false,
            diag_lags: tsmars_core::diagnostics::DEFAULT_LB_LAGS.to_vec(),
            acf_lags: 24,
            band: BandKind::Flat,
            df_correction: 0,
            seed: None,
            process: ProcessKind::Setar,
            n: 500,
            noise_sd: 1.0,
            burn_in: 500,
            threshold: 0.0,
            setar_low: 0.8,
            setar_high: -0.4,
            d: 0.3,
            ar_coefs: Vec::new(),
            start: YearMonth::new(2000, 1).expect("valid month"),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::usage(format!("config: {}", e.message())))
    }

    /// Reads a config file; relative `input` and `out_dir` are taken relative
    /// to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::usage(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text).map_err(|e| e.context(path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(input) = &cfg.input {
            if input.is_relative() {
                cfg.input = Some(base.join(input));
            }
        }
        if cfg.out_dir.is_relative() {
            cfg.out_dir = base.join(&cfg.out_dir);
        }
        Ok(cfg)
    }

    pub fn columns(&self) -> ColumnMap {
        ColumnMap {
            date: self.date_column.clone(),
            value: self.value_column.clone(),
            date_format: self.date_format.clone(),
        }
    }

    pub fn basis_limit(&self) -> Result<BasisLimit> {
        match &self.basis_limit {
            BasisLimitSetting::Rule(r) if r == "p" => Ok(BasisLimit::EqualToP),
            BasisLimitSetting::Rule(r) => Err(Error::usage(format!("basis_limit must be \"p\" or a positive integer, got `{r}`"))),
            BasisLimitSetting::Fixed(0) => Err(Error::usage("basis_limit must be positive")),
            BasisLimitSetting::Fixed(m) => Ok(BasisLimit::Fixed(*m)),
        }
    }

    pub fn grid(&self) -> Result<GridConfig> {
        if self.lags.is_empty() || self.lags.contains(&0) {
            return Err(Error::usage("lags must be a non-empty list of positive integers"));
        }
        if self.kmax.is_empty() || self.kmax.contains(&0) {
            return Err(Error::usage("kmax must be a non-empty list of positive integers"));
        }
        if !self.allow_high_kmax {
            if let Some(k) = self.kmax.iter().find(|k| **k > KMAX_CAP) {
                return Err(Error::usage(format!("kmax {k} exceeds {KMAX_CAP}; set allow_high_kmax to permit it")));
            }
        }
        if !(self.penalty.is_finite() && self.penalty >= 0.0) {
            return Err(Error::usage("penalty must be finite and non-negative"));
        }
        Ok(GridConfig {
            lags: self.lags.clone(),
            k_values: self.kmax.clone(),
            gcv_penalty: self.penalty,
            basis_limit: self.basis_limit()?,
            allow_high_kmax: self.allow_high_kmax,
        })
    }

    pub fn df_mode(&self) -> DfMode {
        match self.df_correction {
            0 => DfMode::LagAsDf,
            k => DfMode::Corrected(k),
        }
    }

    pub fn input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| Error::usage("no input file: pass --input or set `input` in the config"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_the_experimental_grid() {
        let c = PipelineConfig::default();
        let g = c.grid().unwrap();
        assert_eq!(g.lags, vec![6, 12, 24, 36, 48, 60]);
        assert_eq!(g.k_values, vec![1, 2]);
        assert_eq!(g.basis_limit, BasisLimit::EqualToP);
        assert_eq!(g.gcv_penalty, 3.0);
        assert_eq!(c.diag_lags, vec![6, 12, 18, 24]);
        assert_eq!(c.df_mode(), DfMode::LagAsDf);
    }

    #[test]
    fn parses_flat_toml() {
        let c = PipelineConfig::from_toml(
            r#"
            input = "trade.csv"
            split = "1993-01"
            lags = [12, 24]
            kmax = [1]
            basis_limit = 10
            band = "bartlett"
            process = "white-noise"
            df_correction = 2
            "#,
        )
        .unwrap();
        assert_eq!(c.split, YearMonth::new(1993, 1));
        assert_eq!(c.grid().unwrap().basis_limit, BasisLimit::Fixed(10));
        assert_eq!(c.band, BandKind::Bartlett);
        assert_eq!(c.process, ProcessKind::WhiteNoise);
        assert_eq!(c.df_mode(), DfMode::Corrected(2));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(PipelineConfig::from_toml("unknown_key = 1").is_err());
        assert!(PipelineConfig::from_toml("split = \"1993-13\"").is_err());
        let c = PipelineConfig::from_toml("kmax = [4]").unwrap();
        assert!(c.grid().is_err());
        let c = PipelineConfig::from_toml("kmax = [4]\nallow_high_kmax = true").unwrap();
        assert!(c.grid().is_ok());
        let c = PipelineConfig::from_toml("basis_limit = \"q\"").unwrap();
        assert!(c.grid().is_err());
        let c = PipelineConfig::from_toml("lags = []").unwrap();
        assert!(c.grid().is_err());
    }
}
