use super::secular::SecularRoot;
use crate::backend::{Backend, Op};
use crate::error::{mismatch, Result};
use crate::matrix::RMat;

/// Which child blocks a column of `blockdiag(Z1, Z2)` has support in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColKind {
    Top,
    Full,
    Bottom,
}

/// Plane rotation of columns `p` and `q`: `(x_p, x_q) <- (c x_p + s x_q, c x_q - s x_p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    pub p: usize,
    pub q: usize,
    pub c: f64,
    pub s: f64,
}

/// The rank-one modified diagonal problem `diag(d) + rho u u^T` of one merge.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeProblem {
    pub d: Vec<f64>,
    pub u: Vec<f64>,
    pub rho: f64,
    /// Ascending order of `d`.
    pub perm: Vec<usize>,
    /// Indices whose eigenpair is exact without the secular equation.
    pub deflated: Vec<usize>,
    /// Remaining indices, in ascending order of `d`.
    pub kept: Vec<usize>,
    pub rotations: Vec<Rotation>,
    pub kinds: Vec<ColKind>,
}

impl MergeProblem {
    /// `n1` is the size of the leading child; it only labels column support.
    pub fn new(d: Vec<f64>, u: Vec<f64>, rho: f64, n1: usize) -> Self {
        let n = d.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
        let kinds = (0..n).map(|i| if i < n1 { ColKind::Top } else { ColKind::Bottom }).collect();
        Self {
            d,
            u,
            rho,
            kept: perm.clone(),
            perm,
            deflated: Vec::new(),
            rotations: Vec::new(),
            kinds,
        }
    }

    pub fn tolerance(&self) -> f64 {
        let dmax = self.d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let unorm2: f64 = self.u.iter().map(|x| x * x).sum();
        8.0 * f64::EPSILON * dmax.max(self.rho.abs() * unorm2)
    }

    pub fn poles(&self) -> Vec<f64> {
        self.kept.iter().map(|&i| self.d[i]).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.kept.iter().map(|&i| self.u[i]).collect()
    }
}

/// Removes entries with negligible weight and merges nearly equal poles by
/// a rotation that zeroes one weight.
pub fn deflate(mut mp: MergeProblem, tol: f64) -> MergeProblem {
    let rho = mp.rho.abs();
    let mut kept = Vec::with_capacity(mp.perm.len());
    let mut deflated = Vec::new();
    let mut pending: Option<usize> = None;
    for &nj in &mp.perm {
        if rho * mp.u[nj].abs() <= tol {
            deflated.push(nj);
            continue;
        }
        let Some(pj) = pending else {
            pending = Some(nj);
            continue;
        };
        let (zp, zn) = (mp.u[pj], mp.u[nj]);
        let tau = zn.hypot(zp);
        let t = mp.d[nj] - mp.d[pj];
        let c = zn / tau;
        let s = -zp / tau;
        if (t * c * s).abs() <= tol {
            mp.u[nj] = tau;
            mp.u[pj] = 0.0;
            if mp.kinds[nj] != mp.kinds[pj] {
                mp.kinds[nj] = ColKind::Full;
            }
            let (dp, dn) = (mp.d[pj], mp.d[nj]);
            mp.d[pj] = dp * c * c + dn * s * s;
            mp.d[nj] = dp * s * s + dn * c * c;
            mp.rotations.push(Rotation { p: pj, q: nj, c, s });
            deflated.push(pj);
        } else {
            kept.push(pj);
        }
        pending = Some(nj);
    }
    kept.extend(pending);
    mp.kept = kept;
    mp.deflated = deflated;
    mp
}

/// Applies the deflation rotations to the columns of `q`.
pub fn rotate_columns(q: &mut RMat, rotations: &[Rotation]) {
    for r in rotations {
        for i in 0..q.rows() {
            let (x, y) = (q[(i, r.p)], q[(i, r.q)]);
            q[(i, r.p)] = r.c * x + r.s * y;
            q[(i, r.q)] = r.c * y - r.s * x;
        }
    }
}

/// Weights reconstructed from the computed roots so that the secular
/// eigenvectors are numerically orthogonal.
pub fn stable_weights(poles: &[f64], weights: &[f64], rho: f64, roots: &[SecularRoot]) -> Vec<f64> {
    let k = poles.len();
    (0..k)
        .map(|i| {
            // lambda_j - d_i = -delta_j(i)
            let mut w = -roots[i].delta(poles, i) / rho;
            for j in 0..k {
                if j != i {
                    w *= -roots[j].delta(poles, i) / (poles[j] - poles[i]);
                }
            }
            w.abs().sqrt().copysign(weights[i])
        })
        .collect()
}

/// `blockdiag(Z1, Z2) * S` for the requested secular eigenvectors.
///
/// `q` holds the rotated `blockdiag(Z1, Z2)`; `select` lists root indices.
/// Columns are split by support so the product runs as two real gemms
/// through the backend, one per child block.
pub fn merge_vectors(
    mp: &MergeProblem,
    q: &RMat,
    n1: usize,
    roots: &[SecularRoot],
    select: &[usize],
    backend: &dyn Backend,
) -> Result<RMat> {
    let n = q.rows();
    let k = mp.kept.len();
    if roots.len() != k || q.cols() != mp.d.len() {
        return Err(mismatch("merge_vectors", format!("{k} kept poles, {} roots, Q is {}x{}", roots.len(), n, q.cols())));
    }
    let poles = mp.poles();
    let zhat = stable_weights(&poles, &mp.weights(), mp.rho, roots);
    let m = select.len();
    let mut s = RMat::zeros(k, m);
    for (c, &j) in select.iter().enumerate() {
        let col = s.col_mut(c);
        for i in 0..k {
            col[i] = zhat[i] / roots[j].delta(&poles, i);
        }
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        col.iter_mut().for_each(|x| *x /= norm);
    }

    let mut out = RMat::zeros(n, m);
    for (rows, lo, skip) in [(0..n1, 0, ColKind::Bottom), (n1..n, n1, ColKind::Top)] {
        let idx: Vec<usize> = (0..k).filter(|&r| mp.kinds[mp.kept[r]] != skip).collect();
        if idx.is_empty() || rows.is_empty() {
            continue;
        }
        let h = rows.len();
        let qa = RMat::from_fn(h, idx.len(), |i, c| q[(lo + i, mp.kept[idx[c]])]);
        let sa = RMat::from_fn(idx.len(), m, |r, c| s[(idx[r], c)]);
        backend.multiply_accumulate_real(1.0, qa.as_ref(), Op::NoTrans, sa.as_ref(), Op::NoTrans, 0.0, out.sub_mut(lo, 0, h, m))?;
    }
    Ok(out)
}
