//! Small dense least-squares kernels on column-major data.
//!
//! Columns are processed in the order given; a column whose component orthogonal
//! to the earlier columns is negligible is reported as dependent and skipped,
//! which keeps the factorisation usable for sequential (ordered) sums of squares.

use alloc::vec;
use alloc::vec::Vec;

/// Relative norm below which a column is considered dependent on earlier ones.
pub const RANK_TOL: f64 = 1e-7;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// Removes from `v` its components along the orthonormal `basis`
/// (modified Gram-Schmidt, applied twice). Returns the remaining squared norm.
pub fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) -> f64 {
    for _ in 0..2 {
        for q in basis {
            let c = dot(v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
    }
    norm_sq(v)
}

/// Householder QR of an ordered set of columns together with a right-hand side.
#[derive(Debug, Clone)]
pub struct Qr {
    n: usize,
    /// Indices (into the input columns) of the independent columns, in order.
    pub kept: Vec<usize>,
    /// Indices of columns found dependent on earlier ones.
    pub dependent: Vec<usize>,
    /// Upper-triangular factor for the kept columns; `r[j][i]` is row `i` of column `j`.
    r: Vec<Vec<f64>>,
    /// `Q^T y`; the first `kept.len()` entries are the per-column components.
    qty: Vec<f64>,
}

impl Qr {
    pub fn new(columns: &[Vec<f64>], y: &[f64]) -> Self {
        let n = y.len();
        let mut work: Vec<Vec<f64>> = columns.to_vec();
        let mut qty = y.to_vec();
        let mut kept = Vec::new();
        let mut dependent = Vec::new();
        let mut r: Vec<Vec<f64>> = Vec::new();
        let mut rank = 0usize;

        for j in 0..work.len() {
            debug_assert_eq!(work[j].len(), n);
            let orig = libm::sqrt(norm_sq(&columns[j]));
            let tail = libm::sqrt(norm_sq(&work[j][rank..]));
            if rank >= n || orig == 0.0 || tail <= RANK_TOL * orig {
                dependent.push(j);
                continue;
            }
            // Reflector v = x + sign(x0)|x| e0, H = I - 2 v v^T / v^T v.
            let alpha = if work[j][rank] >= 0.0 { -tail } else { tail };
            let mut v: Vec<f64> = work[j][rank..].to_vec();
            v[0] -= alpha;
            let vnorm = norm_sq(&v);
            let apply = |x: &mut [f64]| {
                let s = 2.0 * dot(&v, x) / vnorm;
                for (xi, vi) in x.iter_mut().zip(&v) {
                    *xi -= s * vi;
                }
            };
            let (_, rest) = work.split_at_mut(j);
            let (col, later) = rest.split_first_mut().expect("column j exists");
            for i in rank..n {
                col[i] = 0.0;
            }
            col[rank] = alpha;
            for c in later.iter_mut() {
                apply(&mut c[rank..]);
            }
            apply(&mut qty[rank..]);
            r.push(col[..=rank].to_vec());
            kept.push(j);
            rank += 1;
        }
        Self {
            n,
            kept,
            dependent,
            r,
            qty,
        }
    }

    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    /// Squared projection of `y` onto each successive kept column's new direction.
    pub fn component_ss(&self) -> impl Iterator<Item = f64> + '_ {
        self.qty[..self.rank()].iter().map(|c| c * c)
    }

    /// Residual sum of squares of the least-squares fit.
    pub fn rss(&self) -> f64 {
        norm_sq(&self.qty[self.rank()..self.n])
    }

    /// Least-squares coefficients, one per input column (zero for dependent ones).
    pub fn coefficients(&self, n_columns: usize) -> Vec<f64> {
        let k = self.rank();
        let mut beta = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = self.qty[i];
            for j in i + 1..k {
                s -= self.r[j][i] * beta[j];
            }
            beta[i] = s / self.r[i][i];
        }
        let mut out = vec![0.0; n_columns];
        for (b, &idx) in beta.iter().zip(&self.kept) {
            out[idx] = *b;
        }
        out
    }

    /// Diagonal of `(R^T R)^{-1}` for the kept columns, in kept order.
    pub fn inverse_gram_diagonal(&self) -> Vec<f64> {
        let k = self.rank();
        // Rinv is upper triangular; solve R x = e_j column by column.
        let mut rinv = vec![vec![0.0; k]; k];
        for (j, col) in rinv.iter_mut().enumerate() {
            col[j] = 1.0 / self.r[j][j];
            for i in (0..j).rev() {
                let mut s = 0.0;
                for m in i + 1..=j {
                    s += self.r[m][i] * col[m];
                }
                col[i] = -s / self.r[i][i];
            }
        }
        // diag((R^T R)^{-1}) = row norms of Rinv.
        (0..k)
            .map(|i| (i..k).map(|j| rinv[j][i] * rinv[j][i]).sum())
            .collect()
    }
}

/// Ordinary least squares result.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rss: f64,
    /// Input columns judged dependent (coefficient forced to zero).
    pub dependent: Vec<usize>,
}

pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> LeastSquares {
    let qr = Qr::new(columns, y);
    let coefficients = qr.coefficients(columns.len());
    let mut fitted = vec![0.0; y.len()];
    for (col, b) in columns.iter().zip(&coefficients) {
        if *b != 0.0 {
            for (f, x) in fitted.iter_mut().zip(col) {
                *f += b * x;
            }
        }
    }
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let rss = norm_sq(&residuals);
    LeastSquares {
        coefficients,
        fitted,
        residuals,
        rss,
        dependent: qr.dependent,
    }
}

/// Solves the symmetric positive definite system `a x = b` by Cholesky.
/// Returns `None` if `a` is not numerically positive definite.
pub fn solve_spd(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let k = b.len();
    let mut l = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = a[i][j];
            for m in 0..j {
                s -= l[i][m] * l[j][m];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i][i] = libm::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut z = vec![0.0; k];
    for i in 0..k {
        let s: f64 = (0..i).map(|m| l[i][m] * z[m]).sum();
        z[i] = (b[i] - s) / l[i][i];
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|m| l[m][i] * x[m]).sum();
        x[i] = (z[i] - s) / l[i][i];
    }
    Some(x)
}
