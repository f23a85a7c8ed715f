//! Carries tridiagonal eigenvectors back to eigenvectors of the dense
//! Hermitian matrix: `y = Q_1 Q_2 ... y'`.

use crate::backend::{Backend, Op};
use crate::error::{mismatch, Result};
use crate::matrix::{c64, CMat, MatMut, RMat};
use crate::reflector::{apply_block, triangular_factor, ChaseTag, Layout, ReflectorSet};
use crate::tridiag::TridiagResult;

/// Largest number of chase sweeps merged into one blocked application.
pub const CHASE_GROUP: usize = 32;

/// `Y <- Q Y` for one stage, phase diagonal first.
pub fn apply_q(set: &ReflectorSet, mut y: MatMut<'_, c64>, backend: &dyn Backend) -> Result<()> {
    if y.rows() != set.n {
        return Err(mismatch("apply_q", format!("reflector set of order {}, panel has {} rows", set.n, y.rows())));
    }
    if set.has_phase() {
        for j in 0..y.cols() {
            for (z, p) in y.col_mut(j).iter_mut().zip(&set.phase) {
                *z *= p;
            }
        }
    }
    match &set.layout {
        Layout::Panels(blocks) => {
            for blk in blocks.iter().rev() {
                if blk.count == 0 {
                    continue;
                }
                let idx: Vec<usize> = (blk.start..blk.start + blk.count).collect();
                let top = set.reflectors[blk.start].offset;
                let bottom = idx.iter().map(|&r| set.reflectors[r].offset + set.reflectors[r].len()).max().unwrap_or(top);
                apply_group(set, &idx, top, bottom, blk.t.as_ref(), y.rb_mut(), backend)?;
            }
        }
        Layout::Chase { tags, bandwidth } => {
            let g = CHASE_GROUP.min(*bandwidth).max(1);
            let starts = sweep_starts(tags);
            let sweeps = starts.len() - 1;
            let mut j0 = sweeps.div_ceil(g) * g;
            while j0 > 0 {
                j0 -= g;
                let j1 = (j0 + g).min(sweeps);
                let steps = starts[j0 + 1] - starts[j0];
                for k in 0..steps {
                    let idx: Vec<usize> = (j0..j1).filter(|&j| starts[j] + k < starts[j + 1]).map(|j| starts[j] + k).collect();
                    let top = set.reflectors[idx[0]].offset;
                    let bottom = idx.iter().map(|&r| set.reflectors[r].offset + set.reflectors[r].len()).max().unwrap_or(top);
                    apply_group(set, &idx, top, bottom, None, y.rb_mut(), backend)?;
                }
            }
        }
    }
    Ok(())
}

/// Index of the first reflector of each sweep, with a final sentinel.
fn sweep_starts(tags: &[ChaseTag]) -> Vec<usize> {
    let mut starts = Vec::new();
    for (i, t) in tags.iter().enumerate() {
        while starts.len() <= t.sweep {
            starts.push(i);
        }
    }
    starts.push(tags.len());
    starts
}

fn apply_group(
    set: &ReflectorSet,
    idx: &[usize],
    top: usize,
    bottom: usize,
    t: Option<&CMat>,
    mut y: MatMut<'_, c64>,
    backend: &dyn Backend,
) -> Result<()> {
    if idx.iter().all(|&r| set.reflectors[r].is_identity()) {
        return Ok(());
    }
    let rows = bottom - top;
    let v = set.dense_block(idx, top, rows);
    let computed;
    let t = match t {
        Some(t) => t,
        None => {
            let taus: Vec<c64> = idx.iter().map(|&r| set.reflectors[r].tau).collect();
            computed = triangular_factor(&v, &taus, backend)?;
            &computed
        }
    };
    let m = y.cols();
    apply_block(&v, t, Op::NoTrans, y.sub_mut(top, 0, rows, m), backend)
}

/// Real panel as complex.
pub fn complexify(yp: &RMat) -> CMat {
    CMat::from_real(yp)
}

/// Eigenvectors of the dense matrix from eigenvectors of its tridiagonal:
/// stages are applied last-to-first, the final stage carrying the phase.
pub fn backtransform_standard(result: &TridiagResult, yp: &RMat, backend: &dyn Backend) -> Result<CMat> {
    let mut y = complexify(yp);
    for set in result.stages.iter().rev() {
        apply_q(set, y.as_mut(), backend)?;
    }
    Ok(y)
}
