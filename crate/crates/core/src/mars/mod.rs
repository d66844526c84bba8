//! Time series adaptive regression splines.
//!
//! A model is an intercept plus coefficient-weighted products of hinge
//! functions of lagged values:
//!
//! ```text
//! f(x) = b0 + sum_m b_m * prod_k [s_km * (x_{v(k,m)} - knot_km)]_+
//! ```
//!
//! Fitting is a greedy forward pass that adds reflected hinge pairs under
//! generalised cross-validation ([`forward_pass`]), a backward pruning pass
//! ([`prune_backward`]) and a driver that runs a `(p, k_max)` grid ([`fit_grid`]).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::timeseries::LagEmbedding;

mod forward;
mod grid;
mod prune;

pub use forward::{forward_pass, ForwardFit, ForwardStep};
pub use grid::{fit_grid, BasisLimit, FitReport, FitRow, GridConfig, RowOutcome};
pub use prune::{prune_backward, PruneStage};

/// Default GCV cost per non-constant basis function.
pub const DEFAULT_GCV_PENALTY: f64 = 3.0;
/// Interaction degrees above this need [`MarsConfig::allow_high_kmax`].
pub const KMAX_CAP: usize = 3;

/// Direction of a hinge: `Plus` is `max(x - knot, 0)`, `Minus` is `max(knot - x, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(into = "i8", try_from = "i8"))]
pub enum Sign {
    Plus,
    Minus,
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = &'static str;

    fn try_from(v: i8) -> core::result::Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err("hinge sign must be +1 or -1"),
        }
    }
}

/// One truncated linear factor on a single lag.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HingeFactor {
    pub sign: Sign,
    pub lag: usize,
    pub knot: f64,
}

impl HingeFactor {
    pub fn new(sign: Sign, lag: usize, knot: f64) -> Self {
        Self { sign, lag, knot }
    }
}

/// Evaluates a hinge at `x`.
#[inline]
pub fn eval_hinge(factor: &HingeFactor, x: f64) -> f64 {
    let z = match factor.sign {
        Sign::Plus => x - factor.knot,
        Sign::Minus => factor.knot - x,
    };
    if z > 0.0 {
        z
    } else {
        0.0
    }
}

/// A coefficient times a product of hinges on distinct lags.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BasisTerm {
    pub coefficient: f64,
    pub factors: Vec<HingeFactor>,
}

impl BasisTerm {
    /// Interaction degree.
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn max_lag(&self) -> usize {
        self.factors.iter().map(|f| f.lag).max().unwrap_or(0)
    }

    pub fn uses_lag(&self, lag: usize) -> bool {
        self.factors.iter().any(|f| f.lag == lag)
    }

    /// Basis function value (without coefficient) on every embedding row.
    pub fn column(&self, embedding: &LagEmbedding) -> Vec<f64> {
        let mut col = vec![1.0; embedding.rows()];
        for f in &self.factors {
            for (c, &x) in col.iter_mut().zip(embedding.lag(f.lag)) {
                *c *= eval_hinge(f, x);
            }
        }
        col
    }

    fn check(&self, k_cap: usize) -> Result<()> {
        if self.factors.is_empty() || self.factors.len() > k_cap {
            return Err(Error::InvalidConfig(alloc::format!(
                "term degree {} outside 1..={k_cap}",
                self.factors.len()
            )));
        }
        for (i, f) in self.factors.iter().enumerate() {
            if f.lag == 0 || !f.knot.is_finite() {
                return Err(Error::InvalidConfig("hinge needs lag >= 1 and a finite knot".into()));
            }
            if self.factors[..i].iter().any(|g| g.lag == f.lag) {
                return Err(Error::InvalidConfig("repeated lag within a term".into()));
            }
        }
        Ok(())
    }
}

/// A fitted spline model together with its fit metadata.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MarsModel {
    pub intercept: f64,
    pub gcv_penalty: f64,
    pub p: usize,
    pub k_max: usize,
    pub rss: f64,
    pub gcv: f64,
    pub n: usize,
    pub terms: Vec<BasisTerm>,
}

impl MarsModel {
    /// Largest lag referenced by any term (0 for an intercept-only model).
    pub fn max_lag(&self) -> usize {
        self.terms.iter().map(BasisTerm::max_lag).max().unwrap_or(0)
    }

    pub fn n_basis(&self) -> usize {
        self.terms.len() + 1
    }

    /// Structural checks on a model, e.g. one read back from a file.
    pub fn validate(&self) -> Result<()> {
        let cap = self.k_max.max(1);
        for t in &self.terms {
            t.check(cap)?;
            if t.max_lag() > self.p {
                return Err(Error::MissingLag {
                    needed: t.max_lag(),
                    available: self.p,
                });
            }
        }
        Ok(())
    }
}

/// Fitting options shared by the forward and backward passes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarsConfig {
    pub k_max: usize,
    /// Maximum number of non-constant basis functions.
    pub basis_limit: usize,
    pub gcv_penalty: f64,
    pub allow_high_kmax: bool,
}

impl MarsConfig {
    pub fn new(k_max: usize, basis_limit: usize) -> Self {
        Self {
            k_max,
            basis_limit,
            gcv_penalty: DEFAULT_GCV_PENALTY,
            allow_high_kmax: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(Error::InvalidConfig("k_max must be at least 1".into()));
        }
        if self.k_max > KMAX_CAP && !self.allow_high_kmax {
            return Err(Error::InvalidConfig(alloc::format!(
                "k_max {} exceeds {KMAX_CAP}; set the override to allow it",
                self.k_max
            )));
        }
        if self.basis_limit == 0 {
            return Err(Error::InvalidConfig("basis limit must be at least 1".into()));
        }
        if !(self.gcv_penalty.is_finite() && self.gcv_penalty >= 0.0) {
            return Err(Error::InvalidConfig("gcv penalty must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// `(rss / n) / (1 - C / n)^2` with `C = n_basis + penalty * (n_basis - 1)`.
pub fn gcv_score(rss: f64, n: usize, n_basis: usize, gcv_penalty: f64) -> Result<f64> {
    let effective = n_basis as f64 + gcv_penalty * n_basis.saturating_sub(1) as f64;
    let nf = n as f64;
    if n == 0 || effective >= nf {
        return Err(Error::ModelTooComplex { effective, n });
    }
    let shrink = 1.0 - effective / nf;
    Ok(rss / nf / (shrink * shrink))
}

/// Fitted values of `model` on every row of `embedding`.
pub fn predict(model: &MarsModel, embedding: &LagEmbedding) -> Result<Vec<f64>> {
    let needed = model.max_lag();
    if needed > embedding.p() {
        return Err(Error::MissingLag {
            needed,
            available: embedding.p(),
        });
    }
    let mut out = vec![model.intercept; embedding.rows()];
    for term in &model.terms {
        for (o, c) in out.iter_mut().zip(term.column(embedding)) {
            *o += term.coefficient * c;
        }
    }
    Ok(out)
}

/// Residuals `y - f(x)` over the embedding rows.
pub fn residuals(model: &MarsModel, embedding: &LagEmbedding) -> Result<Vec<f64>> {
    let fit = predict(model, embedding)?;
    Ok(embedding
        .response()
        .iter()
        .zip(fit)
        .map(|(y, f)| y - f)
        .collect())
}

/// Least-squares coefficients for the given term structure, dropping any term
/// whose column is dependent on earlier ones. Returns the refitted model.
pub(crate) fn refit(
    terms: Vec<BasisTerm>,
    embedding: &LagEmbedding,
    template: &MarsModel,
) -> MarsModel {
    let y = embedding.response();
    let n = y.len();
    let mut columns = Vec::with_capacity(terms.len() + 1);
    columns.push(vec![1.0; n]);
    columns.extend(terms.iter().map(|t| t.column(embedding)));
    let ls = linalg::least_squares(&columns, y);

    let mut kept_terms = Vec::with_capacity(terms.len());
    for (i, mut t) in terms.into_iter().enumerate() {
        if !ls.dependent.contains(&(i + 1)) {
            t.coefficient = ls.coefficients[i + 1];
            kept_terms.push(t);
        }
    }
    let n_basis = kept_terms.len() + 1;
    let gcv = gcv_score(ls.rss, n, n_basis, template.gcv_penalty).unwrap_or(f64::INFINITY);
    MarsModel {
        intercept: ls.coefficients[0],
        gcv_penalty: template.gcv_penalty,
        p: template.p,
        k_max: template.k_max,
        rss: ls.rss,
        gcv,
        n,
        terms: kept_terms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hinge_examples() {
        let plus = HingeFactor::new(Sign::Plus, 1, 0.35);
        let minus = HingeFactor::new(Sign::Minus, 1, 0.35);
        assert!((eval_hinge(&plus, 0.5) - 0.15).abs() < 1e-15);
        assert_eq!(eval_hinge(&plus, 0.2), 0.0);
        assert!((eval_hinge(&minus, 0.2) - 0.15).abs() < 1e-15);
        assert_eq!(eval_hinge(&plus, 0.35), 0.0);
    }

    #[test]
    fn gcv_examples() {
        let g = gcv_score(50.0, 100, 1, 3.0).unwrap();
        assert!((g - 0.5 / (0.99 * 0.99)).abs() < 1e-12);
        assert!((g - 0.510152).abs() < 1e-6);
        assert_eq!(gcv_score(0.0, 100, 5, 3.0).unwrap(), 0.0);
        // n_basis 25 with penalty 3: C = 25 + 72 = 97 < 100; 26 gives 101.
        assert!(gcv_score(1.0, 100, 25, 3.0).is_ok());
        assert!(matches!(
            gcv_score(1.0, 100, 26, 3.0),
            Err(Error::ModelTooComplex { .. })
        ));
        // C == n exactly is rejected.
        assert!(gcv_score(1.0, 10, 10, 0.0).is_err());
    }

    #[test]
    fn sign_conversion() {
        assert_eq!(Sign::try_from(-1i8), Ok(Sign::Minus));
        assert!(Sign::try_from(0i8).is_err());
        assert_eq!(i8::from(Sign::Plus), 1);
    }

    fn model(intercept: f64, terms: Vec<BasisTerm>, p: usize) -> MarsModel {
        MarsModel {
            intercept,
            gcv_penalty: 3.0,
            p,
            k_max: 1,
            rss: 0.0,
            gcv: 0.0,
            n: 0,
            terms,
        }
    }

    #[test]
    fn predict_examples() {
        let e = LagEmbedding::from_values(&[0.1, -0.3, 0.7, 0.2, -1.0, 3.0], 1).unwrap();
        let m = model(0.05, vec![], 1);
        assert_eq!(predict(&m, &e).unwrap(), vec![0.05; 5]);

        // Rows whose lag-1 value is -1 and 3.
        let e = LagEmbedding::from_values(&[-1.0, 3.0, 0.0], 1).unwrap();
        let term = BasisTerm {
            coefficient: 2.0,
            factors: vec![HingeFactor::new(Sign::Plus, 1, 0.0)],
        };
        let m = model(0.5, vec![term], 1);
        assert_eq!(predict(&m, &e).unwrap(), vec![0.5, 6.5]);
    }

    #[test]
    fn predict_rejects_missing_lags() {
        let e = LagEmbedding::from_values(&[0.0, 1.0, 2.0, 3.0], 1).unwrap();
        let term = BasisTerm {
            coefficient: 1.0,
            factors: vec![HingeFactor::new(Sign::Plus, 2, 0.0)],
        };
        assert_eq!(
            predict(&model(0.0, vec![term], 2), &e),
            Err(Error::MissingLag {
                needed: 2,
                available: 1
            })
        );
    }

    #[test]
    fn left_model_at_zero_lag_vector() {
        // Coefficients of the published left sub-series model; hinge terms only,
        // evaluated where every lag equals zero.
        let h = |c: f64, sign, lag, knot| BasisTerm {
            coefficient: c,
            factors: vec![HingeFactor::new(sign, lag, knot)],
        };
        let terms = vec![
            h(-0.437, Sign::Minus, 1, 0.189),
            h(0.361, Sign::Plus, 9, -0.135),
            h(0.388, Sign::Minus, 12, 0.438),
            h(0.318, Sign::Plus, 14, 0.003),
            h(0.167, Sign::Plus, 18, -0.446),
            h(-0.450, Sign::Plus, 19, -0.445),
            h(-0.437, Sign::Plus, 24, 0.350),
        ];
        let e = LagEmbedding::from_values(&[0.0; 25], 24).unwrap();
        let single = model(0.0, vec![terms[1].clone()], 24);
        assert!((predict(&single, &e).unwrap()[0] - 0.048735).abs() < 1e-12);

        let expected = -0.673 - 0.437 * 0.189 + 0.361 * 0.135 + 0.388 * 0.438
            + 0.167 * 0.446
            - 0.450 * 0.445;
        let full = model(-0.673, terms, 24);
        assert!((predict(&full, &e).unwrap()[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(MarsConfig::new(3, 5).validate().is_ok());
        assert!(MarsConfig::new(4, 5).validate().is_err());
        let mut c = MarsConfig::new(4, 5);
        c.allow_high_kmax = true;
        assert!(c.validate().is_ok());
        assert!(MarsConfig::new(0, 5).validate().is_err());
        assert!(MarsConfig::new(1, 0).validate().is_err());
    }
}
