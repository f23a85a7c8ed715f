//! Brute-force reference solvers: cyclic Jacobi for dense Hermitian and real
//! symmetric matrices, and Sturm-sequence bisection for tridiagonals.
//!
//! The real Jacobi routine doubles as the divide-and-conquer base case.

use crate::error::{Error, Result};
use crate::matrix::{c64, CMat, DenseHermitian, EigenDecomposition, RMat, RealSymTridiagonal, SolveMeta};

pub const MAX_SWEEPS: usize = 30;

/// All eigenpairs of a Hermitian matrix, values ascending.
pub fn jacobi_eigh(a: &DenseHermitian) -> Result<(Vec<f64>, CMat)> {
    let n = a.n();
    let mut m = a.matrix().clone();
    let mut v = CMat::identity(n);
    let eps = f64::EPSILON;
    let tiny = f64::MIN_POSITIVE / eps;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let g = apq.norm();
                let (app, aqq) = (m[(p, p)].re, m[(q, q)].re);
                if g <= tiny || g <= eps * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;
                let u = apq / g;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                // G = [[c, s], [-s conj(u), c conj(u)]]
                let gqp = -s * u.conj();
                let gqq = c * u.conj();
                for k in 0..n {
                    let (xp, xq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = xp * c + xq * gqp;
                    m[(k, q)] = xp * s + xq * gqq;
                }
                for k in 0..n {
                    let (xp, xq) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = xp * c + xq * gqp.conj();
                    m[(q, k)] = xp * s + xq * gqq.conj();
                }
                m[(p, q)] = c64::default();
                m[(q, p)] = c64::default();
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
                for k in 0..n {
                    let (xp, xq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = xp * c + xq * gqp;
                    v[(k, q)] = xp * s + xq * gqq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "jacobi",
            iterations: MAX_SWEEPS,
        });
    }
    let vals: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let order = ascending_order(&vals);
    Ok((order.iter().map(|&i| vals[i]).collect(), v.select_cols(&order)))
}

/// Full decomposition from [`jacobi_eigh`].
pub fn jacobi_oracle(a: &DenseHermitian) -> Result<EigenDecomposition> {
    let (values, vectors) = jacobi_eigh(a)?;
    let n = values.len();
    Ok(EigenDecomposition {
        values,
        vectors: Some(vectors),
        range: (1, n),
        meta: SolveMeta {
            method: "jacobi".into(),
            ..SolveMeta::default()
        },
    })
}

/// `L^{-1} A L^{-H}` formed explicitly from an unblocked Cholesky factor of
/// `b` and a dense triangular inverse.
pub fn explicit_standard_form(a: &DenseHermitian, b: &DenseHermitian) -> Result<DenseHermitian> {
    let n = b.n();
    if a.n() != n {
        return Err(Error::DimensionMismatch {
            op: "explicit_standard_form",
            detail: format!("A is {0}x{0}, B is {n}x{n}", a.n()),
        });
    }
    let bm = b.matrix();
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut d = bm[(j, j)].re;
        for p in 0..j {
            d -= l[(j, p)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot_index: j });
        }
        let ljj = d.sqrt();
        l[(j, j)] = c64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = bm[(i, j)];
            for p in 0..j {
                s -= l[(i, p)] * l[(j, p)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    let mut inv = CMat::zeros(n, n);
    for k in 0..n {
        for i in k..n {
            let mut s = if i == k { c64::new(1.0, 0.0) } else { c64::default() };
            for p in k..i {
                s -= l[(i, p)] * inv[(p, k)];
            }
            inv[(i, k)] = s / l[(i, i)];
        }
    }
    crate::matrix::symmetrize(&inv.matmul(a.matrix()).matmul(&inv.adjoint()))
}

/// Generalized eigenvalues of `(a, b)` by Jacobi on [`explicit_standard_form`].
pub fn generalized_oracle_values(a: &DenseHermitian, b: &DenseHermitian) -> Result<Vec<f64>> {
    Ok(jacobi_eigh(&explicit_standard_form(a, b)?)?.0)
}

/// All eigenpairs of a real symmetric matrix (lower triangle read), values ascending.
pub fn jacobi_eigh_real(a: &RMat) -> Result<(Vec<f64>, RMat)> {
    let n = a.rows();
    let mut m = RMat::from_fn(n, n, |i, j| if i >= j { a[(i, j)] } else { a[(j, i)] });
    let mut v = RMat::identity(n);
    let eps = f64::EPSILON;
    let tiny = f64::MIN_POSITIVE / eps;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let (app, aqq) = (m[(p, p)], m[(q, q)]);
                if apq.abs() <= tiny || apq.abs() <= eps * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (xp, xq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * xp - s * xq;
                    m[(k, q)] = s * xp + c * xq;
                }
                for k in 0..n {
                    let (xp, xq) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * xp - s * xq;
                    m[(q, k)] = s * xp + c * xq;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let (xp, xq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * xp - s * xq;
                    v[(k, q)] = s * xp + c * xq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "jacobi",
            iterations: MAX_SWEEPS,
        });
    }
    let vals: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    let order = ascending_order(&vals);
    Ok((order.iter().map(|&i| vals[i]).collect(), v.select_cols(&order)))
}

fn ascending_order(vals: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    order
}

/// Number of eigenvalues of `t` strictly below `x`.
pub fn sturm_count(t: &RealSymTridiagonal, x: f64) -> usize {
    let pivmin = f64::MIN_POSITIVE.max(f64::MIN_POSITIVE * t.e.iter().map(|e| e * e).fold(1.0, f64::max));
    let mut count = 0;
    let mut q = t.d[0] - x;
    for i in 0.. {
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        if i + 1 == t.n() {
            break;
        }
        q = t.d[i + 1] - x - t.e[i] * t.e[i] / q;
    }
    count
}

/// All eigenvalues of `t` by bisection on the Sturm count, ascending.
pub fn sturm_eigenvalues(t: &RealSymTridiagonal) -> Vec<f64> {
    let n = t.n();
    let bound = t.norm_bound();
    let pad = 4.0 * f64::EPSILON * bound.max(f64::MIN_POSITIVE) + f64::MIN_POSITIVE;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-bound - pad, bound + pad);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(t, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}
