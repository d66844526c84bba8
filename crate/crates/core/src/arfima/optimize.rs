//! One-dimensional search over the fractional order and a small
//! Levenberg-Marquardt solver for conditional sums of squares.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::solve_spd;

pub const D_MIN: f64 = 0.01;
pub const D_MAX: f64 = 0.99;
pub const D_STEP: f64 = 0.01;
pub const D_TOL: f64 = 1e-4;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// The search grid `0.01, 0.02, ..., 0.99`.
pub fn d_grid() -> Vec<f64> {
    let steps = libm::round((D_MAX - D_MIN) / D_STEP) as usize;
    (0..=steps).map(|i| D_MIN + i as f64 * D_STEP).collect()
}

/// Golden-section minimisation on `[lo, hi]` until the bracket is below `tol`.
/// Returns the best point evaluated together with its value.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimises `sum r_i(u)^2` with a forward-difference Jacobian.
/// `residuals` writes into the provided buffer and returns the sum of squares
/// (non-finite values are treated as rejected steps).
pub fn levenberg_marquardt<F>(mut residuals: F, start: &[f64], n_resid: usize) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let k = start.len();
    let mut u = start.to_vec();
    let mut r = vec![0.0; n_resid];
    let mut ss = residuals(&u, &mut r);
    if k == 0 || !ss.is_finite() {
        return (u, ss);
    }
    let mut jac = vec![vec![0.0; n_resid]; k];
    let mut r_trial = vec![0.0; n_resid];
    let mut lambda = 1e-3;

    for _ in 0..100 {
        for j in 0..k {
            let h = 1e-7 * (1.0 + libm::fabs(u[j]));
            let mut up = u.clone();
            up[j] += h;
            residuals(&up, &mut r_trial);
            for i in 0..n_resid {
                jac[j][i] = (r_trial[i] - r[i]) / h;
            }
        }
        let mut jtj = vec![vec![0.0; k]; k];
        let mut jtr = vec![0.0; k];
        for a in 0..k {
            jtr[a] = jac[a].iter().zip(&r).map(|(x, y)| x * y).sum();
            for b in 0..=a {
                let v: f64 = jac[a].iter().zip(&jac[b]).map(|(x, y)| x * y).sum();
                jtj[a][b] = v;
                jtj[b][a] = v;
            }
        }

        let mut improved = false;
        for _ in 0..30 {
            let mut m = jtj.clone();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += lambda * (jtj[i][i] + 1e-12);
            }
            let neg: Vec<f64> = jtr.iter().map(|v| -v).collect();
            let Some(step) = solve_spd(&m, &neg) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = u.iter().zip(&step).map(|(a, b)| a + b).collect();
            let ss_trial = residuals(&trial, &mut r_trial);
            if ss_trial.is_finite() && ss_trial < ss {
                let rel = (ss - ss_trial) / ss.max(f64::MIN_POSITIVE);
                u = trial;
                ss = ss_trial;
                core::mem::swap(&mut r, &mut r_trial);
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if rel < 1e-12 {
                    return (u, ss);
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (u, ss)
}
