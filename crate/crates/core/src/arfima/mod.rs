//! Long-memory modelling: fractional differencing, estimation of the
//! differencing order by conditional sum of squares, ARFIMA(p, d, q) order
//! selection by AIC and subset autoregressions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

mod fracdiff;
mod optimize;
mod subset;

pub use fracdiff::{apply_fracdiff, apply_weights, expansion_weights, fracdiff_coeffs, integrate_fractional};
pub use optimize::{d_grid, golden_section, D_MAX, D_MIN, D_TOL};
pub use subset::{ar_is_stationary, fit_subset_ar, SubsetArModel};

/// Largest AR or MA order accepted by the grid fit.
pub const MAX_ARMA_ORDER: usize = 3;
/// Default minimum series length for estimating `d`.
pub const DEFAULT_MIN_LEN: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Stationarity {
    /// `0 < d < 0.5`
    Stationary,
    /// `0.5 <= d < 1`
    Nonstationary,
    /// `d` outside `(0, 1)`.
    Outside,
}

impl Stationarity {
    pub fn of(d: f64) -> Self {
        if d > 0.0 && d < 0.5 {
            Stationarity::Stationary
        } else if (0.5..1.0).contains(&d) {
            Stationarity::Nonstationary
        } else {
            Stationarity::Outside
        }
    }
}

impl fmt::Display for Stationarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stationarity::Stationary => "stationary",
            Stationarity::Nonstationary => "nonstationary",
            Stationarity::Outside => "outside",
        })
    }
}

/// A fitted ARFIMA(p, d, q) model.
///
/// The recursion is applied to `(1 - B)^d (x - mean)`; the first `n_cond`
/// residuals are fixed at zero.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArfimaModel {
    pub p: usize,
    pub q: usize,
    pub d: f64,
    pub ar_coeffs: Vec<f64>,
    pub ma_coeffs: Vec<f64>,
    pub mean: f64,
    pub sigma2: f64,
    pub css: f64,
    pub aic: f64,
    /// Residuals entering the sum of squares.
    pub n: usize,
    pub n_cond: usize,
}

impl ArfimaModel {
    pub fn stationarity(&self) -> Stationarity {
        Stationarity::of(self.d)
    }

    /// Conditional residuals on `values` (length `values.len() - n_cond`).
    pub fn residuals(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() <= self.n_cond {
            return Err(Error::TooShort {
                len: values.len(),
                needed: self.n_cond,
            });
        }
        let centered: Vec<f64> = values.iter().map(|v| v - self.mean).collect();
        let w = apply_weights(&centered, &expansion_weights(self.d, values.len() - 1));
        let mut e = vec![0.0; w.len()];
        arma_residuals(&w, &self.ar_coeffs, &self.ma_coeffs, self.n_cond, &mut e);
        Ok(e.split_off(self.n_cond))
    }
}

/// One cell of the ARFIMA order grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArfimaRow {
    pub p: usize,
    pub q: usize,
    pub d: f64,
    pub css: f64,
    pub aic: f64,
    pub flag: Stationarity,
}

/// Result of the one-dimensional search for `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DEstimate {
    pub d: f64,
    pub css: f64,
    /// `(d, css)` at every grid point.
    pub profile: Vec<(f64, f64)>,
}

fn centered(values: &[f64]) -> Vec<f64> {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| v - mean).collect()
}

fn check_input(values: &[f64], min_len: usize) -> Result<Vec<f64>> {
    if values.len() < min_len.max(2) {
        return Err(Error::TooShort {
            len: values.len(),
            needed: min_len.max(2) - 1,
        });
    }
    if values.iter().all(|v| *v == values[0]) {
        return Err(Error::FlatObjective);
    }
    Ok(centered(values))
}

/// `e_t = w_t - sum phi_i w_{t-i} - sum theta_j e_{t-j}` for `t >= n_cond`,
/// zero before. Returns the sum of squares.
pub(crate) fn arma_residuals(w: &[f64], ar: &[f64], ma: &[f64], n_cond: usize, e: &mut [f64]) -> f64 {
    debug_assert!(n_cond >= ar.len());
    let mut ss = 0.0;
    for v in e[..n_cond].iter_mut() {
        *v = 0.0;
    }
    for t in n_cond..w.len() {
        let mut v = w[t];
        for (i, phi) in ar.iter().enumerate() {
            v -= phi * w[t - 1 - i];
        }
        for (j, theta) in ma.iter().enumerate() {
            if t > j {
                v -= theta * e[t - 1 - j];
            }
        }
        e[t] = v;
        ss += v * v;
    }
    ss
}

/// Maps unconstrained values to the coefficients of a stable polynomial
/// `1 - a_1 z - ... - a_k z^k` via partial autocorrelations in (-1, 1).
pub(crate) fn stable_coefficients(u: &[f64]) -> Vec<f64> {
    let mut a: Vec<f64> = Vec::with_capacity(u.len());
    for (k, &x) in u.iter().enumerate() {
        let r = libm::tanh(x);
        let prev = a.clone();
        for j in 0..k {
            a[j] = prev[j] - r * prev[k - 1 - j];
        }
        a.push(r);
    }
    a
}

/// Minimises the conditional sum of squares of an ARMA(p, q) on `w`.
/// Returns the unconstrained parameters and the CSS.
fn fit_arma_css(w: &[f64], p: usize, n_cond: usize, start: &[f64]) -> (Vec<f64>, f64) {
    let mut e = vec![0.0; w.len()];
    let objective = |u: &[f64], r: &mut [f64]| {
        let ar = stable_coefficients(&u[..p]);
        let ma: Vec<f64> = stable_coefficients(&u[p..]).iter().map(|a| -a).collect();
        let ss = arma_residuals(w, &ar, &ma, n_cond, &mut e);
        r.copy_from_slice(&e[n_cond..]);
        ss
    };
    optimize::levenberg_marquardt(objective, start, w.len() - n_cond)
}

fn minimize_over_d<F: FnMut(f64) -> f64>(mut objective: F) -> (f64, f64, Vec<(f64, f64)>) {
    let grid = d_grid();
    let profile: Vec<(f64, f64)> = grid.iter().map(|&d| (d, objective(d))).collect();
    let (best_i, _) = profile
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, (_, v))| if *v < acc.1 { (i, *v) } else { acc });
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(grid.len() - 1)];
    let (d, v) = golden_section(&mut objective, lo, hi, D_TOL);
    let (gd, gv) = profile[best_i];
    let (d, v) = if v <= gv { (d, v) } else { (gd, gv) };
    (d, v, profile)
}

/// Chooses `d` in `[0.01, 0.99]` minimising the sum of squares of the
/// fractionally differenced, mean-centred series: a 0.01 grid followed by
/// golden-section refinement to `1e-4`.
pub fn estimate_d(values: &[f64], min_len: usize) -> Result<DEstimate> {
    let x = check_input(values, min_len)?;
    let css = |d: f64| {
        let w = apply_weights(&x, &expansion_weights(d, x.len() - 1));
        w.iter().map(|v| v * v).sum::<f64>()
    };
    let (d, css, profile) = minimize_over_d(css);
    let first = profile[0].1;
    if profile.iter().all(|(_, v)| *v == first) {
        return Err(Error::FlatObjective);
    }
    Ok(DEstimate { d, css, profile })
}

/// Fits ARFIMA(p, d, q) for every `p <= p_max`, `q <= q_max` and returns the
/// minimum-AIC model with the full table in `p`-major order.
///
/// `d` is profiled: for each candidate `d` the ARMA part is fitted by
/// conditional sum of squares, and the outer search is the same grid plus
/// golden-section scheme as [`estimate_d`]. Every cell conditions on the first
/// `p_max` observations so the criteria are comparable;
/// `AIC = n ln(css / n) + 2 (p + q + 1)`.
pub fn fit_arfima_grid(values: &[f64], p_max: usize, q_max: usize, min_len: usize) -> Result<(ArfimaModel, Vec<ArfimaRow>)> {
    if p_max > MAX_ARMA_ORDER || q_max > MAX_ARMA_ORDER {
        return Err(Error::InvalidConfig(alloc::format!(
            "ARMA orders are limited to {MAX_ARMA_ORDER}"
        )));
    }
    let x = check_input(values, min_len.max(p_max + 2))?;
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let n_cond = p_max;
    let n_eff = x.len() - n_cond;

    let grid = d_grid();
    let filtered: Vec<Vec<f64>> = grid
        .iter()
        .map(|&d| apply_weights(&x, &expansion_weights(d, x.len() - 1)))
        .collect();
    let filter = |d: f64| -> Vec<f64> {
        match grid.iter().position(|g| *g == d) {
            Some(i) => filtered[i].clone(),
            None => apply_weights(&x, &expansion_weights(d, x.len() - 1)),
        }
    };

    let mut rows = Vec::new();
    let mut best: Option<ArfimaModel> = None;
    for p in 0..=p_max {
        for q in 0..=q_max {
            let k = p + q;
            let mut warm = vec![0.0; k];
            let params_at = |d: f64, warm: &mut Vec<f64>| -> (Vec<f64>, f64) {
                let w = filter(d);
                let (u, css) = fit_arma_css(&w, p, n_cond, warm);
                let (u, css) = if k > 0 && warm.iter().any(|v| *v != 0.0) {
                    // a cold start guards against a warm start stuck in a poor basin
                    let (u0, c0) = fit_arma_css(&w, p, n_cond, &vec![0.0; k]);
                    if c0 < css { (u0, c0) } else { (u, css) }
                } else {
                    (u, css)
                };
                *warm = u.clone();
                (u, css)
            };

            let mut best_u: Vec<f64> = Vec::new();
            let mut best_css = f64::INFINITY;
            let (d, css, _) = minimize_over_d(|d| {
                let (u, css) = params_at(d, &mut warm);
                if css < best_css {
                    best_css = css;
                    best_u = u;
                }
                css
            });
            // The reported parameters must belong to the chosen d.
            let (u, css) = if css == best_css {
                (best_u, css)
            } else {
                params_at(d, &mut warm)
            };
            let ar = stable_coefficients(&u[..p]);
            let ma: Vec<f64> = stable_coefficients(&u[p..]).iter().map(|a| -a).collect();
            let aic = n_eff as f64 * libm::log(css / n_eff as f64) + 2.0 * (k + 1) as f64;
            let model = ArfimaModel {
                p,
                q,
                d,
                ar_coeffs: ar,
                ma_coeffs: ma,
                mean,
                sigma2: css / n_eff as f64,
                css,
                aic,
                n: n_eff,
                n_cond,
            };
            rows.push(ArfimaRow {
                p,
                q,
                d,
                css,
                aic,
                flag: model.stationarity(),
            });
            if best.as_ref().is_none_or(|b| aic < b.aic) {
                best = Some(model);
            }
        }
    }
    Ok((best.expect("grid has at least one cell"), rows))
}
