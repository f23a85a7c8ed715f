use crate::backend::{Backend, Op, Overlap};
use crate::error::{Error, Result};
use crate::matrix::{c64, BandHermitian, CMat, DenseHermitian, MatMut, MatRef};
use crate::reflector::{apply_block, make_reflector, Layout, PanelBlock, Reflector, ReflectorSet, Stage};

const ZERO: c64 = c64::new(0.0, 0.0);
const ONE: c64 = c64::new(1.0, 0.0);

/// Blocked reduction to half-bandwidth `b`.
///
/// Each panel below the band is factored by a recursive QR that keeps its
/// work in matrix-matrix products; the two-sided trailing update is a
/// Hermitian product followed by a rank-`2b` update, issued with the overlap
/// hint and fenced before the next panel reads the trailing matrix.
pub fn reduce_to_band(ap: &DenseHermitian, b: usize, backend: &dyn Backend) -> Result<(BandHermitian, ReflectorSet)> {
    let n = ap.n();
    if b == 0 || b >= n {
        return Err(Error::InvalidBandwidth { b, n });
    }
    let mut a = ap.matrix().clone();
    let mut reflectors = Vec::new();
    let mut blocks = Vec::new();

    let mut p0 = 0;
    while p0 + b + 1 < n {
        let r0 = p0 + b;
        let m = n - r0;
        let r = m.min(b);
        let (v, t) = {
            let mut panel = a.sub_mut(r0, p0, m, b);
            let t = qr_recursive(panel.sub_mut(0, 0, m, r), backend)?;
            let v = unit_lower(panel.rb().sub(0, 0, m, r));
            if r < b {
                apply_block(&v, &t, Op::ConjTrans, panel.sub_mut(0, r, m, b - r), backend)?;
            }
            for j in 0..r {
                panel.col_mut(j)[j + 1..].fill(ZERO);
            }
            (v, t)
        };
        let start = reflectors.len();
        for j in 0..r {
            reflectors.push(Reflector {
                offset: r0 + j,
                tau: t[(j, j)],
                tail: v.col(j)[j + 1..].to_vec(),
            });
        }

        let mut x = CMat::zeros(m, r);
        backend.hermitian_multiply(ONE, a.sub(r0, r0, m, m), v.as_ref(), ZERO, x.as_mut())?;
        let mut w = CMat::zeros(m, r);
        backend.multiply_accumulate(ONE, x.as_ref(), Op::NoTrans, t.as_ref(), Op::NoTrans, ZERO, w.as_mut())?;
        let mut s = CMat::zeros(r, r);
        backend.multiply_accumulate(ONE, v.as_ref(), Op::ConjTrans, w.as_ref(), Op::NoTrans, ZERO, s.as_mut())?;
        let mut s2 = CMat::zeros(r, r);
        backend.multiply_accumulate(ONE, t.as_ref(), Op::ConjTrans, s.as_ref(), Op::NoTrans, ZERO, s2.as_mut())?;
        backend.multiply_accumulate(c64::new(-0.5, 0.0), v.as_ref(), Op::NoTrans, s2.as_ref(), Op::NoTrans, ONE, w.as_mut())?;
        backend.hermitian_rank2_update(-ONE, v.as_ref(), w.as_ref(), 1.0, a.sub_mut(r0, r0, m, m), Overlap::Allowed)?;
        backend.fence();

        blocks.push(PanelBlock {
            start,
            count: r,
            t: Some(t),
        });
        p0 += b;
    }

    let mut band = BandHermitian::zeros(n, b)?;
    for j in 0..n {
        band.set_lower(j, j, c64::new(a[(j, j)].re, 0.0));
        for i in j + 1..n.min(j + b + 1) {
            band.set_lower(i, j, a[(i, j)]);
        }
    }
    let set = ReflectorSet {
        stage: Stage::BandReduction,
        n,
        reflectors,
        layout: Layout::Panels(blocks),
        phase: vec![ONE; n],
    };
    Ok((band, set))
}

/// Explicit unit lower trapezoidal factor stored below the diagonal of `a`.
fn unit_lower(a: MatRef<'_, c64>) -> CMat {
    CMat::from_fn(a.rows(), a.cols(), |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => ZERO,
        std::cmp::Ordering::Equal => ONE,
        std::cmp::Ordering::Greater => a.get(i, j),
    })
}

/// Recursive QR of a tall panel (`rows >= cols`). On return `a` holds `R` on
/// and above the diagonal and the reflector tails below; the result is the
/// forward triangular factor `T` with `Q = I - V T V^H`.
pub(crate) fn qr_recursive(mut a: MatMut<'_, c64>, backend: &dyn Backend) -> Result<CMat> {
    let (m, k) = (a.rows(), a.cols());
    debug_assert!(m >= k);
    if k == 1 {
        let col = a.col_mut(0);
        let (head, tail) = col.split_at_mut(1);
        let (tau, beta) = make_reflector(head[0], tail);
        head[0] = beta;
        return Ok(CMat::from_fn(1, 1, |_, _| tau));
    }
    let k1 = k / 2;
    let k2 = k - k1;
    let (mut a1, mut a2) = a.rb_mut().split_cols(k1);
    let t1 = qr_recursive(a1.rb_mut(), backend)?;
    let v1 = unit_lower(a1.rb());
    apply_block(&v1, &t1, Op::ConjTrans, a2.rb_mut(), backend)?;
    let t2 = qr_recursive(a2.sub_mut(k1, 0, m - k1, k2), backend)?;
    let v2 = unit_lower(a2.rb().sub(k1, 0, m - k1, k2));

    // T12 = -T1 (V1^H V2) T2, V2 being zero in the first k1 rows.
    let mut s = CMat::zeros(k1, k2);
    backend.multiply_accumulate(ONE, v1.sub(k1, 0, m - k1, k1), Op::ConjTrans, v2.as_ref(), Op::NoTrans, ZERO, s.as_mut())?;
    let mut u = CMat::zeros(k1, k2);
    backend.multiply_accumulate(ONE, t1.as_ref(), Op::NoTrans, s.as_ref(), Op::NoTrans, ZERO, u.as_mut())?;
    backend.multiply_accumulate(-ONE, u.as_ref(), Op::NoTrans, t2.as_ref(), Op::NoTrans, ZERO, s.as_mut())?;

    let mut t = CMat::zeros(k, k);
    t.sub_mut(0, 0, k1, k1).copy_from(t1.as_ref());
    t.sub_mut(0, k1, k1, k2).copy_from(s.as_ref());
    t.sub_mut(k1, k1, k2, k2).copy_from(t2.as_ref());
    Ok(t)
}
