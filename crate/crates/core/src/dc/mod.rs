//! Divide-and-conquer eigensolver for real symmetric tridiagonal matrices.
//!
//! `T` is torn at the middle into two tridiagonals plus a rank-one term,
//! both halves are solved recursively, and each merge solves the secular
//! equation of `diag(Lambda1, Lambda2) + rho u u^T`. Secular roots, deflation
//! and the inner eigenvectors are computed on the host; the update
//! `blockdiag(Z1, Z2) * S` goes through the backend. Only the outermost
//! merge is restricted to the selected eigenvectors.

mod merge;
mod secular;

pub use merge::{deflate, merge_vectors, rotate_columns, stable_weights, ColKind, MergeProblem, Rotation};
pub use secular::{secular_solve, SecularRoot, MAX_ITER};

use crate::backend::Backend;
use crate::error::{Error, Result};
use crate::matrix::{EigenSelection, RMat, RealSymTridiagonal};
use crate::oracle::jacobi_eigh_real;

/// Subproblems at most this large are solved directly.
pub const DEFAULT_BASE: usize = 25;

/// Full spectrum plus, when requested, the selected eigenvectors.
#[derive(Clone, Debug)]
pub struct DcResult {
    /// All `n` eigenvalues, ascending.
    pub values: Vec<f64>,
    /// `n x m` eigenvectors for `range`.
    pub vectors: Option<RMat>,
    /// 1-based inclusive selected range.
    pub range: (usize, usize),
}

impl DcResult {
    pub fn selected_values(&self) -> &[f64] {
        &self.values[self.range.0 - 1..self.range.1]
    }
}

/// The two halves of a tear and the coupling `rho (e_{cut-1} + e_cut)(...)^T`.
#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub t1: RealSymTridiagonal,
    pub t2: RealSymTridiagonal,
    pub rho: f64,
    pub cut: usize,
}

impl Split {
    /// Reassembles `blockdiag(T1, T2) + rho v v^T`.
    pub fn glue(&self) -> RealSymTridiagonal {
        let mut d = self.t1.d.clone();
        d.extend_from_slice(&self.t2.d);
        let mut e = self.t1.e.clone();
        e.push(self.rho);
        e.extend_from_slice(&self.t2.e);
        d[self.cut - 1] += self.rho;
        d[self.cut] += self.rho;
        RealSymTridiagonal { d, e }
    }
}

pub fn split_and_glue(t: &RealSymTridiagonal, cut: usize) -> Result<Split> {
    let n = t.n();
    if cut == 0 || cut >= n {
        return Err(Error::InvalidSplit { cut, n });
    }
    let rho = t.e[cut - 1];
    let mut d1 = t.d[..cut].to_vec();
    let mut d2 = t.d[cut..].to_vec();
    d1[cut - 1] -= rho;
    d2[0] -= rho;
    Ok(Split {
        t1: RealSymTridiagonal::new(d1, t.e[..cut - 1].to_vec())?,
        t2: RealSymTridiagonal::new(d2, t.e[cut..].to_vec())?,
        rho,
        cut,
    })
}

/// Eigenvalues of `t` (always all of them) and the eigenvectors selected by
/// `sel`.
pub fn dc_solve(t: &RealSymTridiagonal, sel: &EigenSelection, backend: &dyn Backend) -> Result<DcResult> {
    dc_solve_with_base(t, sel, DEFAULT_BASE, backend)
}

pub fn dc_solve_with_base(
    t: &RealSymTridiagonal,
    sel: &EigenSelection,
    base: usize,
    backend: &dyn Backend,
) -> Result<DcResult> {
    let n = t.n();
    let range = sel.resolve(n)?;
    let scale = t.d.iter().chain(&t.e).fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        let vectors = sel.vectors.then(|| RMat::from_fn(n, range.1 - range.0 + 1, |i, j| f64::from(i == range.0 - 1 + j)));
        return Ok(DcResult {
            values: vec![0.0; n],
            vectors,
            range,
        });
    }
    let scaled = RealSymTridiagonal {
        d: t.d.iter().map(|x| x / scale).collect(),
        e: t.e.iter().map(|x| x / scale).collect(),
    };
    let cols = sel.vectors.then_some((range.0 - 1, range.1 - 1));
    let (mut values, vectors) = solve_node(&scaled, cols, sel.vectors, base.max(1), backend)?;
    values.iter_mut().for_each(|x| *x *= scale);
    Ok(DcResult { values, vectors, range })
}

type Node = (Vec<f64>, Option<RMat>);

fn solve_node(
    t: &RealSymTridiagonal,
    cols: Option<(usize, usize)>,
    vectors: bool,
    base: usize,
    backend: &dyn Backend,
) -> Result<Node> {
    let n = t.n();
    if n <= base.max(2) {
        let (values, z) = jacobi_eigh_real(&t.to_dense())?;
        let z = vectors.then(|| match cols {
            Some((lo, hi)) => z.select_cols(&(lo..=hi).collect::<Vec<_>>()),
            None => z,
        });
        return Ok((values, z));
    }
    let split = split_and_glue(t, n / 2)?;
    let (v1, z1) = solve_node(&split.t1, None, true, base, backend)?;
    let (v2, z2) = solve_node(&split.t2, None, true, base, backend)?;
    merge_children(&v1, &z1.expect("child vectors"), &v2, &z2.expect("child vectors"), split.rho, cols, vectors, backend)
}

enum Source {
    Deflated(usize),
    Root(usize),
}

#[allow(clippy::too_many_arguments)]
fn merge_children(
    v1: &[f64],
    z1: &RMat,
    v2: &[f64],
    z2: &RMat,
    rho: f64,
    cols: Option<(usize, usize)>,
    vectors: bool,
    backend: &dyn Backend,
) -> Result<Node> {
    let (n1, n2) = (v1.len(), v2.len());
    let n = n1 + n2;
    let mut q = RMat::zeros(n, n);
    for j in 0..n1 {
        q.col_mut(j)[..n1].copy_from_slice(z1.col(j));
    }
    for j in 0..n2 {
        q.col_mut(n1 + j)[n1..].copy_from_slice(z2.col(j));
    }
    let u: Vec<f64> = (0..n1).map(|j| z1[(n1 - 1, j)]).chain((0..n2).map(|j| z2[(0, j)])).collect();
    let unorm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (z, rho_n) = if unorm == 0.0 {
        (u, 0.0)
    } else {
        (u.iter().map(|x| x / unorm).collect(), rho * unorm * unorm)
    };
    // Canonical form has rho > 0; otherwise solve for -D.
    let sign = if rho_n < 0.0 { -1.0 } else { 1.0 };
    let d: Vec<f64> = v1.iter().chain(v2).map(|x| sign * x).collect();
    let mp = MergeProblem::new(d, z, rho_n.abs(), n1);
    let tol = mp.tolerance();
    let mp = deflate(mp, tol);
    rotate_columns(&mut q, &mp.rotations);

    let poles = mp.poles();
    let weights = mp.weights();
    let roots = (0..poles.len())
        .map(|i| secular_solve(&poles, &weights, mp.rho, i))
        .collect::<Result<Vec<_>>>()?;

    let mut entries: Vec<(f64, Source)> = mp
        .deflated
        .iter()
        .map(|&i| (sign * mp.d[i], Source::Deflated(i)))
        .chain(roots.iter().enumerate().map(|(r, root)| (sign * root.value(&poles), Source::Root(r))))
        .collect();
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    let values: Vec<f64> = entries.iter().map(|e| e.0).collect();
    if !vectors {
        return Ok((values, None));
    }

    let (lo, hi) = cols.unwrap_or((0, n - 1));
    let picked = &entries[lo..=hi];
    let select: Vec<usize> = picked
        .iter()
        .filter_map(|e| match e.1 {
            Source::Root(r) => Some(r),
            Source::Deflated(_) => None,
        })
        .collect();
    let secular = merge_vectors(&mp, &q, n1, &roots, &select, backend)?;
    let mut out = RMat::zeros(n, picked.len());
    let mut next_root = 0;
    for (c, e) in picked.iter().enumerate() {
        match e.1 {
            Source::Deflated(i) => out.col_mut(c).copy_from_slice(q.col(i)),
            Source::Root(_) => {
                out.col_mut(c).copy_from_slice(secular.col(next_root));
                next_root += 1;
            }
        }
    }
    Ok((values, Some(out)))
}
