//! Fitted models as JSON documents tagged by `kind`.
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces every coefficient bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tsmars_core::arfima::{ArfimaModel, SubsetArModel};
use tsmars_core::mars::{self, MarsModel};
use tsmars_core::timeseries::LagEmbedding;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelFile {
    Tsmars(MarsModel),
    Arfima(ArfimaModel),
    SubsetAr(SubsetArModel),
}

impl ModelFile {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelFile::Tsmars(_) => "tsmars",
            ModelFile::Arfima(_) => "arfima",
            ModelFile::SubsetAr(_) => "subset_ar",
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("models serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: ModelFile = serde_json::from_str(text).map_err(|e| Error::data(format!("model file: {e}")))?;
        if let ModelFile::Tsmars(m) = &model {
            m.validate()?;
        }
        Ok(model)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| e.context(path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    /// In-sample residuals of the model on `values`, over the rows the model
    /// can predict.
    pub fn residuals(&self, values: &[f64]) -> Result<Vec<f64>> {
        Ok(match self {
            ModelFile::Tsmars(m) => {
                let e = LagEmbedding::from_values(values, m.p)?;
                mars::residuals(m, &e)?
            }
            ModelFile::Arfima(m) => m.residuals(values)?,
            ModelFile::SubsetAr(m) => m.residuals_on(values)?,
        })
    }
}
