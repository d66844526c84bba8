//! Backward deletion of basis functions under GCV.

use alloc::vec;
use alloc::vec::Vec;

use super::{refit, MarsModel};
use crate::linalg::Qr;
use crate::timeseries::LagEmbedding;

/// Summary of one model visited during pruning.
#[derive(Debug, Clone, PartialEq)]
pub struct PruneStage {
    pub n_terms: usize,
    pub rss: f64,
    pub gcv: f64,
}

/// Repeatedly deletes the non-constant term whose removal gives the lowest
/// GCV, refitting after each deletion, and returns the best-GCV model seen
/// (which may be the input structure itself) plus the sequence of stages.
///
/// The RSS increase from dropping column `j` is `beta_j^2 / [(X^T X)^{-1}]_jj`,
/// so each stage needs a single QR factorisation.
pub fn prune_backward(model: &MarsModel, embedding: &LagEmbedding) -> (MarsModel, Vec<PruneStage>) {
    let mut current = refit(model.terms.clone(), embedding, model);
    let mut stages = vec![stage(&current)];
    let mut best = current.clone();

    while !current.terms.is_empty() {
        let y = embedding.response();
        let mut columns = Vec::with_capacity(current.terms.len() + 1);
        columns.push(vec![1.0; y.len()]);
        columns.extend(current.terms.iter().map(|t| t.column(embedding)));
        let qr = Qr::new(&columns, y);
        let beta = qr.coefficients(columns.len());
        let diag = qr.inverse_gram_diagonal();

        // kept indices line up with columns because refit dropped dependent terms
        let mut drop = 0usize;
        let mut drop_cost = f64::INFINITY;
        for (pos, &col) in qr.kept.iter().enumerate().skip(1) {
            let cost = beta[col] * beta[col] / diag[pos];
            if cost < drop_cost {
                drop_cost = cost;
                drop = col - 1;
            }
        }
        if !drop_cost.is_finite() {
            drop = current.terms.len() - 1;
        }
        let mut terms = current.terms.clone();
        terms.remove(drop);
        current = refit(terms, embedding, model);
        stages.push(stage(&current));
        if current.gcv <= best.gcv {
            best = current.clone();
        }
    }
    (best, stages)
}

fn stage(m: &MarsModel) -> PruneStage {
    PruneStage {
        n_terms: m.terms.len(),
        rss: m.rss,
        gcv: m.gcv,
    }
}
