mod common;

use common::{fractional_noise, gaussian, rng};
use tsmars_core::arfima::{
    apply_fracdiff, estimate_d, fit_arfima_grid, fit_subset_ar, integrate_fractional, DEFAULT_MIN_LEN,
};
use tsmars_core::diagnostics::{acf, BandKind};

#[test]
fn d_recovered_from_fractional_noise() {
    let x = fractional_noise(11, 2000, 0.3);
    let est = estimate_d(&x, DEFAULT_MIN_LEN).unwrap();
    assert!((0.22..=0.38).contains(&est.d), "d = {}", est.d);
}

#[test]
fn white_noise_has_small_d() {
    let x = gaussian(&mut rng(12), 2000, 1.0);
    let est = estimate_d(&x, DEFAULT_MIN_LEN).unwrap();
    assert!(est.d < 0.08, "d = {}", est.d);
}

#[test]
fn differencing_long_memory_whitens_it() {
    let mut hits = 0;
    for seed in 0..20 {
        let e = gaussian(&mut rng(300 + seed), 1000, 1.0);
        let y = integrate_fractional(&e, 0.3).unwrap();
        let raw = acf(&y, 1).unwrap();
        assert!(raw.r[0] > raw.se_band);
        let w = apply_fracdiff(&y, 0.3).unwrap();
        hits += (acf(&w, 24).unwrap().fraction_inside(BandKind::Flat) >= 0.9) as usize;
    }
    assert!(hits >= 18, "{hits} of 20");
}

#[test]
fn grid_on_fractional_noise() {
    let x = fractional_noise(14, 2000, 0.3);
    let (best, rows) = fit_arfima_grid(&x, 3, 3, DEFAULT_MIN_LEN).unwrap();
    assert_eq!(rows.len(), 16);
    assert!(best.aic <= rows[0].aic);
    for r in &rows {
        assert!(best.aic <= r.aic);
        assert!((0.01..=0.99).contains(&r.d));
    }
}

#[test]
fn fractional_noise_selects_zero_orders() {
    let runs = 50;
    let mut zero = 0;
    for seed in 0..runs {
        let e = gaussian(&mut rng(500 + seed), 2000, 1.0);
        let x = integrate_fractional(&e, 0.3).unwrap();
        let (best, _) = fit_arfima_grid(&x, 3, 3, DEFAULT_MIN_LEN).unwrap();
        zero += (best.p == 0 && best.q == 0) as usize;
    }
    assert!(zero * 5 >= runs as usize * 4, "(0, 0) chosen in {zero} of {runs} runs");
}

#[test]
fn subset_ar_lag_two() {
    let mut r = rng(15);
    let eps = gaussian(&mut r, 1200, 1.0);
    let mut z = vec![0.0; 1200];
    for t in 2..1200 {
        z[t] = 0.4 * z[t - 2] + eps[t];
    }
    let m = fit_subset_ar(&z[200..], &[2], false).unwrap();
    assert!((m.coefficients[0] - 0.4).abs() < 0.07, "{:?}", m.coefficients);
}
