//! Greedy forward selection of reflected hinge pairs.
//!
//! Every step scans all `(parent, lag, knot)` triples. For a fixed parent `b`
//! and lag `x` the pair `b(x - t)_+`, `b(t - x)_+` spans the same space (given
//! the current basis, which contains `b`) as `{b x, b (x - t)_+}`. The linear
//! part is shared by every knot, and the hinge part is scored for all knots in
//! one descending sweep that keeps running sums, so each knot costs O(M) for M
//! current basis functions.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{gcv_score, refit, BasisTerm, HingeFactor, MarsConfig, MarsModel, Sign};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq, orthogonalize};
use crate::timeseries::LagEmbedding;

/// Squared-norm ratio below which an orthogonalised column counts as degenerate.
const DEGENERATE_TOL: f64 = 1e-10;
/// GCV values within this fraction of the intercept-only GCV are ties.
const TIE_TOL: f64 = 1e-12;

/// One accepted forward step.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardStep {
    /// Index of the parent basis function (0 is the constant).
    pub parent: usize,
    pub lag: usize,
    pub knot: f64,
    /// Hinge directions actually added (one or both sides of the pair).
    pub added: Vec<Sign>,
    /// Residual sum of squares after the step.
    pub rss: f64,
    pub gcv: f64,
}

/// Forward pass output: the unpruned model plus the step history.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardFit {
    pub model: MarsModel,
    pub steps: Vec<ForwardStep>,
    /// RSS and GCV of the intercept-only start.
    pub initial_rss: f64,
    pub initial_gcv: f64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gcv: f64,
    lag: usize,
    knot: f64,
    parent: usize,
}

impl Candidate {
    /// Tie-break order: lower lag, then lower knot, then earlier parent.
    fn tie_order(&self, other: &Self) -> Ordering {
        self.lag
            .cmp(&other.lag)
            .then(self.knot.total_cmp(&other.knot))
            .then(self.parent.cmp(&other.parent))
    }
}

/// Candidates whose GCV lies within `tol` of the running minimum.
struct Shortlist {
    tol: f64,
    best: f64,
    items: Vec<Candidate>,
}

impl Shortlist {
    fn new(tol: f64) -> Self {
        Self {
            tol,
            best: f64::INFINITY,
            items: Vec::new(),
        }
    }

    fn offer(&mut self, c: Candidate) {
        if c.gcv < self.best {
            self.best = c.gcv;
            let cut = self.best + self.tol;
            self.items.retain(|x| x.gcv <= cut);
        }
        if c.gcv <= self.best + self.tol {
            self.items.push(c);
        }
    }

    fn winner(self) -> Option<Candidate> {
        self.items.into_iter().min_by(|a, b| a.tie_order(b))
    }
}

struct Basis {
    values: Vec<f64>,
    factors: Vec<HingeFactor>,
}

struct State<'a> {
    emb: &'a LagEmbedding,
    cfg: MarsConfig,
    n: usize,
    bases: Vec<Basis>,
    /// Orthonormal basis spanning the raw columns in `bases`.
    q: Vec<Vec<f64>>,
    resid: Vec<f64>,
    rss: f64,
    /// Row indices sorted by descending lag value, per lag (index 0 unused).
    order: Vec<Vec<usize>>,
}

impl<'a> State<'a> {
    fn new(emb: &'a LagEmbedding, cfg: MarsConfig) -> Self {
        let y = emb.response();
        let n = y.len();
        let ones = vec![1.0; n];
        let q0: Vec<f64> = vec![1.0 / libm::sqrt(n as f64); n];
        let mean = y.iter().sum::<f64>() / n as f64;
        let resid: Vec<f64> = y.iter().map(|v| v - mean).collect();
        let rss = norm_sq(&resid);
        let mut order = vec![Vec::new()];
        for j in 1..=emb.p() {
            let x = emb.lag(j);
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));
            order.push(idx);
        }
        Self {
            emb,
            cfg,
            n,
            bases: vec![Basis {
                values: ones,
                factors: Vec::new(),
            }],
            q: vec![q0],
            resid,
            rss,
            order,
        }
    }

    fn n_terms(&self) -> usize {
        self.bases.len() - 1
    }

    /// Scores every knot for one `(parent, lag)` pair.
    fn scan(&self, parent: usize, lag: usize, shortlist: &mut Shortlist) {
        let b = &self.bases[parent].values;
        let x = self.emb.lag(lag);

        let linear: Vec<f64> = b.iter().zip(x).map(|(bi, xi)| bi * xi).collect();
        let lin_norm = norm_sq(&linear);
        if lin_norm == 0.0 {
            return;
        }
        let mut lin_perp = linear;
        let nu = orthogonalize(&mut lin_perp, &self.q);
        let lin_new = nu > DEGENERATE_TOL * lin_norm;

        let mut resid = self.resid.clone();
        let mut lin_gain = 0.0;
        let mut extra_q: Option<Vec<f64>> = None;
        if lin_new {
            let s = 1.0 / libm::sqrt(nu);
            lin_perp.iter_mut().for_each(|v| *v *= s);
            let c = dot(&lin_perp, &resid);
            lin_gain = c * c;
            for (r, qv) in resid.iter_mut().zip(&lin_perp) {
                *r -= c * qv;
            }
            extra_q = Some(lin_perp);
        }

        // Running sums over rows with x_i > t: for each direction w,
        // a_w = sum b w x and c_w = sum b w, so that <b (x - t)_+, w> = a_w - t c_w.
        let dirs: Vec<&[f64]> = self
            .q
            .iter()
            .map(Vec::as_slice)
            .chain(extra_q.as_deref())
            .collect();
        let k = dirs.len();
        let mut a = vec![0.0; k];
        let mut c = vec![0.0; k];
        let (mut ar, mut cr) = (0.0, 0.0);
        let (mut s_bb, mut s_bbx, mut s_bbxx) = (0.0, 0.0, 0.0);

        let base_rank = lin_new as usize;
        let order = &self.order[lag];
        let mut pos = 0;
        while pos < order.len() {
            let t = x[order[pos]];
            let mut end = pos;
            while end < order.len() && x[order[end]] == t {
                end += 1;
            }
            let group = &order[pos..end];
            pos = end;
            if group.iter().all(|&i| b[i] == 0.0) {
                continue;
            }

            let cc = s_bbxx - 2.0 * t * s_bbx + t * t * s_bb;
            let mut hinge_gain = 0.0;
            let mut hinge_new = false;
            if cc > 0.0 {
                let proj: f64 = (0..k)
                    .map(|j| {
                        let v = a[j] - t * c[j];
                        v * v
                    })
                    .sum();
                let perp = cc - proj;
                if perp > DEGENERATE_TOL * cc {
                    hinge_new = true;
                    let cr_t = ar - t * cr;
                    hinge_gain = cr_t * cr_t / perp;
                }
            }
            let rank = base_rank + hinge_new as usize;
            if rank > 0 && self.n_terms() + rank <= self.cfg.basis_limit {
                let rss = (self.rss - lin_gain - hinge_gain).max(0.0);
                if let Ok(gcv) = gcv_score(rss, self.n, self.bases.len() + rank, self.cfg.gcv_penalty) {
                    shortlist.offer(Candidate {
                        gcv,
                        lag,
                        knot: t,
                        parent,
                    });
                }
            }

            for &i in group {
                let bi = b[i];
                if bi == 0.0 {
                    continue;
                }
                let xi = x[i];
                for j in 0..k {
                    let w = bi * dirs[j][i];
                    a[j] += w * xi;
                    c[j] += w;
                }
                let w = bi * resid[i];
                ar += w * xi;
                cr += w;
                let bb = bi * bi;
                s_bb += bb;
                s_bbx += bb * xi;
                s_bbxx += bb * xi * xi;
            }
        }
    }

    fn best_candidate(&self, tol: f64) -> Option<Candidate> {
        let mut shortlist = Shortlist::new(tol);
        for parent in 0..self.bases.len() {
            let pf = &self.bases[parent].factors;
            if pf.len() >= self.cfg.k_max {
                continue;
            }
            for lag in 1..=self.emb.p() {
                if pf.iter().any(|f| f.lag == lag) {
                    continue;
                }
                self.scan(parent, lag, &mut shortlist);
            }
        }
        shortlist.winner()
    }

    /// Adds the non-degenerate sides of the pair; returns the directions added.
    fn accept(&mut self, cand: &Candidate) -> Vec<Sign> {
        let x = self.emb.lag(cand.lag);
        let mut added = Vec::new();
        for sign in [Sign::Plus, Sign::Minus] {
            let factor = HingeFactor::new(sign, cand.lag, cand.knot);
            let parent = &self.bases[cand.parent];
            let values: Vec<f64> = parent
                .values
                .iter()
                .zip(x)
                .map(|(bi, &xi)| bi * super::eval_hinge(&factor, xi))
                .collect();
            let norm = norm_sq(&values);
            if norm == 0.0 {
                continue;
            }
            let mut perp = values.clone();
            let nu = orthogonalize(&mut perp, &self.q);
            if nu <= DEGENERATE_TOL * norm {
                continue;
            }
            let s = 1.0 / libm::sqrt(nu);
            perp.iter_mut().for_each(|v| *v *= s);
            let coef = dot(&perp, &self.resid);
            for (r, qv) in self.resid.iter_mut().zip(&perp) {
                *r -= coef * qv;
            }
            self.q.push(perp);
            let mut factors = parent.factors.clone();
            factors.push(factor);
            self.bases.push(Basis { values, factors });
            added.push(sign);
        }
        self.rss = norm_sq(&self.resid);
        added
    }
}

/// Runs the forward pass from the constant basis function.
///
/// Stops when the basis limit is reached or when no admissible candidate lowers
/// GCV. A constant response yields an intercept-only model.
pub fn forward_pass(embedding: &LagEmbedding, config: &MarsConfig) -> Result<ForwardFit> {
    config.validate()?;
    let n = embedding.rows();
    if n < 2 {
        return Err(Error::DegenerateEmbedding("fewer than two rows"));
    }
    let mut state = State::new(embedding, *config);
    let initial_rss = state.rss;
    let initial_gcv = gcv_score(initial_rss, n, 1, config.gcv_penalty)?;
    let tol = TIE_TOL * initial_gcv;

    let mut current_gcv = initial_gcv;
    let mut steps = Vec::new();
    while state.n_terms() < config.basis_limit {
        let Some(cand) = state.best_candidate(tol) else {
            break;
        };
        if !(cand.gcv < current_gcv - tol) {
            break;
        }
        let before = state.bases.len();
        let added = state.accept(&cand);
        if added.is_empty() {
            break;
        }
        let gcv = gcv_score(state.rss, n, state.bases.len(), config.gcv_penalty)
            .unwrap_or(f64::INFINITY);
        debug_assert!(state.bases.len() > before);
        current_gcv = gcv;
        steps.push(ForwardStep {
            parent: cand.parent,
            lag: cand.lag,
            knot: cand.knot,
            added,
            rss: state.rss,
            gcv,
        });
    }

    let terms: Vec<BasisTerm> = state
        .bases
        .into_iter()
        .skip(1)
        .map(|b| BasisTerm {
            coefficient: 0.0,
            factors: b.factors,
        })
        .collect();
    let template = MarsModel {
        intercept: 0.0,
        gcv_penalty: config.gcv_penalty,
        p: embedding.p(),
        k_max: config.k_max,
        rss: 0.0,
        gcv: 0.0,
        n,
        terms: Vec::new(),
    };
    let model = refit(terms, embedding, &template);
    Ok(ForwardFit {
        model,
        steps,
        initial_rss,
        initial_gcv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mars::predict;

    #[test]
    fn exact_linear_response_found_at_lag_one() {
        let mut z = vec![1.0];
        for _ in 0..39 {
            let last = *z.last().unwrap();
            z.push(0.5 * last);
        }
        let e = LagEmbedding::from_values(&z, 3).unwrap();
        let fit = forward_pass(&e, &MarsConfig::new(1, 3)).unwrap();
        assert_eq!(fit.steps[0].lag, 1);
        let pred = predict(&fit.model, &e).unwrap();
        for (p, y) in pred.iter().zip(e.response()) {
            assert!((p - y).abs() < 1e-8);
        }
    }

    #[test]
    fn constant_response_gives_intercept_only() {
        let e = LagEmbedding::from_values(&[0.3; 30], 4).unwrap();
        let fit = forward_pass(&e, &MarsConfig::new(2, 4)).unwrap();
        assert!(fit.model.terms.is_empty());
        assert!((fit.model.intercept - 0.3).abs() < 1e-15);
    }

    #[test]
    fn too_few_rows_is_degenerate() {
        let e = LagEmbedding::from_values(&[0.1, 0.2], 1).unwrap();
        assert!(matches!(
            forward_pass(&e, &MarsConfig::new(1, 1)),
            Err(Error::DegenerateEmbedding(_))
        ));
    }

    #[test]
    fn shortlist_prefers_lower_lag_then_knot_then_parent() {
        let mut s = Shortlist::new(1e-9);
        s.offer(Candidate { gcv: 1.0, lag: 2, knot: 0.0, parent: 0 });
        s.offer(Candidate { gcv: 1.0 + 1e-12, lag: 1, knot: 0.5, parent: 1 });
        s.offer(Candidate { gcv: 1.0, lag: 1, knot: 0.5, parent: 0 });
        s.offer(Candidate { gcv: 1.5, lag: 1, knot: -1.0, parent: 0 });
        let w = s.winner().unwrap();
        assert_eq!((w.lag, w.knot, w.parent), (1, 0.5, 0));

        let mut s = Shortlist::new(1e-9);
        s.offer(Candidate { gcv: 2.0, lag: 1, knot: 0.0, parent: 0 });
        s.offer(Candidate { gcv: 1.0, lag: 3, knot: 0.0, parent: 0 });
        assert_eq!(s.winner().unwrap().lag, 3);
    }
}
