use super::{realify, TridiagResult};
use crate::backend::{Backend, Op, Overlap};
use crate::error::Result;
use crate::matrix::{c64, CMat, DenseHermitian};
use crate::reflector::{make_reflector, Layout, PanelBlock, Reflector, ReflectorSet, Stage};

const ZERO: c64 = c64::new(0.0, 0.0);
const ONE: c64 = c64::new(1.0, 0.0);

/// Blocked Householder tridiagonalization of the lower triangle.
///
/// Each panel of `block` columns is reduced with matrix-vector products
/// against the not yet updated trailing matrix; the accumulated update is
/// then applied as one rank-`2 block` update.
pub fn tridiagonalize_one_stage(ap: &DenseHermitian, block: usize, backend: &dyn Backend) -> Result<TridiagResult> {
    let n = ap.n();
    let nb = block.max(1);
    let before = backend.counts();
    let mut a = ap.matrix().clone();
    let mut d = vec![0.0; n];
    let mut sub = vec![ZERO; n.saturating_sub(1)];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(1));
    let mut blocks = Vec::new();

    let mut p0 = 0;
    while p0 + 1 < n {
        let kb = nb.min(n - 1 - p0);
        let rows = n - p0;
        let mut v = CMat::zeros(rows, kb);
        let mut w = CMat::zeros(rows, kb);
        for j in 0..kb {
            let c = p0 + j;
            let len = n - c;
            if j > 0 {
                let wc: Vec<c64> = (0..j).map(|l| w[(j, l)].conj()).collect();
                let vc: Vec<c64> = (0..j).map(|l| v[(j, l)].conj()).collect();
                let col = &mut a.col_mut(c)[c..];
                backend.matvec_accumulate(-ONE, v.sub(j, 0, len, j), Op::NoTrans, &wc, ONE, col)?;
                backend.matvec_accumulate(-ONE, w.sub(j, 0, len, j), Op::NoTrans, &vc, ONE, col)?;
            }
            d[c] = a[(c, c)].re;

            let col = &mut a.col_mut(c)[c + 1..];
            let (head, tail) = col.split_at_mut(1);
            let (tau, beta) = make_reflector(head[0], tail);
            sub[c] = beta;
            let mut hv = Vec::with_capacity(len - 1);
            hv.push(ONE);
            hv.extend_from_slice(tail);
            reflectors.push(Reflector {
                offset: c + 1,
                tau,
                tail: tail.to_vec(),
            });
            head[0] = beta;
            tail.fill(ZERO);
            v.col_mut(j)[j + 1..].copy_from_slice(&hv);

            if tau == ZERO {
                continue;
            }
            let m = len - 1;
            let mut y = vec![ZERO; m];
            backend.hermitian_matvec(ONE, a.sub(c + 1, c + 1, m, m), &hv, ZERO, &mut y)?;
            if j > 0 {
                let mut t = vec![ZERO; j];
                backend.matvec_accumulate(ONE, w.sub(j + 1, 0, m, j), Op::ConjTrans, &hv, ZERO, &mut t)?;
                backend.matvec_accumulate(-ONE, v.sub(j + 1, 0, m, j), Op::NoTrans, &t, ONE, &mut y)?;
                backend.matvec_accumulate(ONE, v.sub(j + 1, 0, m, j), Op::ConjTrans, &hv, ZERO, &mut t)?;
                backend.matvec_accumulate(-ONE, w.sub(j + 1, 0, m, j), Op::NoTrans, &t, ONE, &mut y)?;
            }
            y.iter_mut().for_each(|z| *z *= tau);
            let dot: c64 = y.iter().zip(&hv).map(|(p, q)| p.conj() * q).sum();
            let alpha = -0.5 * tau * dot;
            for (wi, (yi, vi)) in w.col_mut(j)[j + 1..].iter_mut().zip(y.iter().zip(&hv)) {
                *wi = yi + alpha * vi;
            }
        }
        let t0 = p0 + kb;
        let m = n - t0;
        backend.hermitian_rank2_update(
            -ONE,
            v.sub(kb, 0, m, kb),
            w.sub(kb, 0, m, kb),
            1.0,
            a.sub_mut(t0, t0, m, m),
            Overlap::None,
        )?;
        blocks.push(PanelBlock {
            start: p0,
            count: kb,
            t: None,
        });
        p0 += kb;
    }
    d[n - 1] = a[(n - 1, n - 1)].re;

    let (t, phase) = realify(d, &sub)?;
    let after = backend.counts();
    Ok(TridiagResult {
        t,
        stages: vec![ReflectorSet {
            stage: Stage::OneStage,
            n,
            reflectors,
            layout: Layout::Panels(blocks),
            phase,
        }],
        band_width: None,
        stage_counts: vec![&after - &before],
    })
}
