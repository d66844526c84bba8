//! Variance partition of a fitted spline model by basis-function class.
//!
//! Columns are grouped as constant, linear, then nonlinear (interior-knot
//! splines before interactions) and orthogonalised in that order; each block is
//! credited with the squared length of the response's projection onto its new
//! directions. Shared variance therefore goes to the earlier class.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{norm_sq, Qr};
use crate::mars::{BasisTerm, MarsModel, Sign};
use crate::timeseries::LagEmbedding;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TermClass {
    Constant,
    Linear,
    Nonlinear,
}

/// Finer split of a non-constant term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermKind {
    /// Single hinge active over the whole observed range of its lag.
    Linear,
    /// Single hinge with its knot inside the observed range.
    LinearSpline,
    /// Product of two or more hinges.
    Interaction,
}

impl TermKind {
    pub fn class(self) -> TermClass {
        match self {
            TermKind::Linear => TermClass::Linear,
            TermKind::LinearSpline | TermKind::Interaction => TermClass::Nonlinear,
        }
    }
}

pub fn term_kind(term: &BasisTerm, embedding: &LagEmbedding) -> TermKind {
    match term.factors.as_slice() {
        [f] => {
            let col = embedding.lag(f.lag);
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let whole_range = match f.sign {
                Sign::Plus => f.knot <= lo,
                Sign::Minus => f.knot >= hi,
            };
            if whole_range {
                TermKind::Linear
            } else {
                TermKind::LinearSpline
            }
        }
        _ => TermKind::Interaction,
    }
}

/// Linear when the hinge covers the full training range of its lag,
/// nonlinear otherwise.
pub fn classify_term(term: &BasisTerm, embedding: &LagEmbedding) -> TermClass {
    term_kind(term, embedding).class()
}

/// Sums of squares by class; totals are about zero so the constant is a component.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnovaDecomposition {
    pub ss_total: f64,
    pub ss_constant: f64,
    pub ss_linear: f64,
    pub ss_nonlinear: f64,
    /// Part of `ss_nonlinear` from single interior-knot hinges.
    pub ss_linear_spline: f64,
    /// Part of `ss_nonlinear` from products of hinges.
    pub ss_interaction: f64,
    pub ss_residual: f64,
    pub pct_constant: f64,
    pub pct_linear: f64,
    pub pct_nonlinear: f64,
    pub pct_residual: f64,
    pub n_linear: usize,
    pub n_nonlinear: usize,
}

/// Partitions `sum y^2` over the model's basis columns. Percentages are NaN when
/// the response is identically zero.
pub fn decompose(model: &MarsModel, embedding: &LagEmbedding) -> AnovaDecomposition {
    let y = embedding.response();
    let n = y.len();

    let mut by_kind: [Vec<&BasisTerm>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for t in &model.terms {
        let slot = match term_kind(t, embedding) {
            TermKind::Linear => 0,
            TermKind::LinearSpline => 1,
            TermKind::Interaction => 2,
        };
        by_kind[slot].push(t);
    }

    let mut columns = vec![vec![1.0; n]];
    let mut block = vec![0usize];
    for (b, terms) in by_kind.iter().enumerate() {
        for t in terms {
            columns.push(t.column(embedding));
            block.push(b + 1);
        }
    }
    let qr = Qr::new(&columns, y);
    let mut ss = [0.0f64; 4];
    for (&col, s) in qr.kept.iter().zip(qr.component_ss()) {
        ss[block[col]] += s;
    }

    let ss_total = norm_sq(y);
    let ss_residual = qr.rss();
    let ss_nonlinear = ss[2] + ss[3];
    let pct = |v: f64| {
        if ss_total > 0.0 {
            100.0 * v / ss_total
        } else {
            f64::NAN
        }
    };
    AnovaDecomposition {
        ss_total,
        ss_constant: ss[0],
        ss_linear: ss[1],
        ss_nonlinear,
        ss_linear_spline: ss[2],
        ss_interaction: ss[3],
        ss_residual,
        pct_constant: pct(ss[0]),
        pct_linear: pct(ss[1]),
        pct_nonlinear: pct(ss_nonlinear),
        pct_residual: pct(ss_residual),
        n_linear: by_kind[0].len(),
        n_nonlinear: by_kind[1].len() + by_kind[2].len(),
    }
}

/// `100 * ss_nonlinear / ss_total`.
pub fn pct_nonlinearity(d: &AnovaDecomposition) -> Result<f64> {
    if !(d.ss_total > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok(100.0 * d.ss_nonlinear / d.ss_total)
}
