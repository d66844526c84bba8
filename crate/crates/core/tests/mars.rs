mod common;

use tsmars_core::anova::{decompose, AnovaDecomposition};
use tsmars_core::mars::{fit_grid, forward_pass, prune_backward, GridConfig, MarsConfig, MarsModel};
use tsmars_core::timeseries::{embed_lags, GrowthSeries, LagEmbedding};
use tsmars_core::YearMonth;

fn fit(values: &[f64], p: usize, k_max: usize) -> (LagEmbedding, MarsModel, tsmars_core::mars::ForwardFit) {
    let e = LagEmbedding::from_values(values, p).unwrap();
    let fwd = forward_pass(&e, &MarsConfig::new(k_max, p)).unwrap();
    let (pruned, _) = prune_backward(&fwd.model, &e);
    (e, pruned, fwd)
}

fn assert_closure(a: &AnovaDecomposition) {
    let sum = a.ss_constant + a.ss_linear + a.ss_nonlinear + a.ss_residual;
    assert!((sum - a.ss_total).abs() <= 1e-8 * a.ss_total, "{a:?}");
    let pct = a.pct_constant + a.pct_linear + a.pct_nonlinear + a.pct_residual;
    assert!((pct - 100.0).abs() <= 0.01, "{pct}");
}

#[test]
fn setar_threshold_recovered() {
    let mut hits = 0;
    for seed in 0..10 {
        let z = common::setar(100 + seed, 500, 0.8, -0.4, 0.1);
        let (e, model, _) = fit(&z, 6, 1);
        let found = model
            .terms
            .iter()
            .flat_map(|t| &t.factors)
            .any(|f| f.lag == 1 && f.knot.abs() <= 0.1);
        hits += found as usize;
        assert_closure(&decompose(&model, &e));
    }
    assert!(hits >= 8, "{hits} of 10");
}

#[test]
fn gcv_discipline_and_anova_closure_on_random_data() {
    for seed in 0..50u64 {
        let mut r = common::rng(seed);
        let n = 60 + (seed as usize % 5) * 20;
        let z = common::uniform(&mut r, n);
        let p = 2 + seed as usize % 5;
        let k_max = 1 + seed as usize % 2;
        let (e, pruned, fwd) = fit(&z, p, k_max);

        let mut prev = fwd.initial_rss;
        for s in &fwd.steps {
            assert!(s.rss <= prev * (1.0 + 1e-12) + 1e-15);
            prev = s.rss;
        }
        assert!(pruned.gcv <= fwd.model.gcv * (1.0 + 1e-12));
        if k_max == 1 {
            assert!(pruned.terms.iter().chain(&fwd.model.terms).all(|t| t.degree() == 1));
        }
        assert_closure(&decompose(&pruned, &e));
    }
}

#[test]
fn interactions_appear_with_kmax_two() {
    // a hinge on lag 1 that also scales the effect of lag 2
    let mut r = common::rng(7);
    let eps = common::gaussian(&mut r, 600, 0.5);
    let mut z = vec![0.0f64; 600];
    z[0] = 0.3;
    z[1] = -0.2;
    for t in 2..600 {
        let h = z[t - 1].max(0.0);
        z[t] = 0.5 * h + (1.5 * h * z[t - 2]).tanh() + eps[t];
    }
    let e = LagEmbedding::from_values(&z[100..], 3).unwrap();
    let mut cfg = MarsConfig::new(2, 8);
    cfg.gcv_penalty = 2.0;
    let fwd = forward_pass(&e, &cfg).unwrap();
    let (model, _) = prune_backward(&fwd.model, &e);
    assert!(model.terms.iter().any(|t| t.degree() == 2));
    let a = decompose(&model, &e);
    assert_closure(&a);
    assert!(a.ss_interaction > 0.0);
}

#[test]
fn default_grid_report_shape() {
    let z = common::setar(42, 300, 0.8, -0.4, 0.1);
    let g = GrowthSeries::new(YearMonth::new(1980, 1).unwrap(), z).unwrap();
    let (best, report) = fit_grid(&g, &GridConfig::default()).unwrap();
    assert_eq!(report.rows.len(), 12);
    let pairs: Vec<(usize, usize)> = report.rows.iter().map(|r| (r.p, r.k_max)).collect();
    assert_eq!(pairs[..4], [(6, 1), (6, 2), (12, 1), (12, 2)]);
    let gbest = report.rows[report.best].gcv().unwrap();
    assert_eq!(gbest, best.gcv);
    assert!(report.rows.iter().filter_map(|r| r.gcv()).all(|g| g >= gbest));
    let e = embed_lags(&g, best.p).unwrap();
    assert_closure(&decompose(&best, &e));
}
