//! Nonlinear and long-memory time series modelling.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! * [`timeseries`]: growth-rate transforms, sub-series splitting and lag embeddings.
//! * [`mars`]: time series adaptive regression splines (forward selection of
//!   hinge-product basis functions under GCV, backward pruning, grid fitting).
//! * [`anova`]: term classification and the variance partition of a fitted spline model.
//! * [`arfima`]: fractional differencing, long-memory order estimation, ARFIMA grids
//!   and subset autoregressions.
//! * [`diagnostics`]: autocorrelations, Ljung-Box tables, Jarque-Bera normality and
//!   squared-residual checks.
//!
//! IO, file formats and the command line live in the companion `tsmars` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod anova;
pub mod arfima;
pub mod calendar;
pub mod diagnostics;
mod error;
pub mod linalg;
pub mod mars;
pub mod special;
pub mod timeseries;

pub use calendar::YearMonth;
pub use error::{Error, Result};
