//! Householder reflectors and the compact stores produced by each reduction.
//!
//! A reflector is `H = I - tau v v^H` with `v[0] = 1` implicit, acting on rows
//! `offset .. offset + len` of the full space. Sets are ordered so that the
//! stage's unitary factor is the product `H_0 H_1 ... H_{k-1}`, up to the
//! grouping described by [`Layout`].

use crate::backend::{Backend, Op};
use crate::error::Result;
use crate::matrix::{c64, CMat, MatMut};

const ZERO: c64 = c64::new(0.0, 0.0);
const ONE: c64 = c64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Reflector {
    pub offset: usize,
    pub tau: c64,
    /// Entries after the implicit leading one.
    pub tail: Vec<c64>,
}

impl Reflector {
    pub fn len(&self) -> usize {
        self.tail.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_identity(&self) -> bool {
        self.tau == ZERO
    }

    #[inline]
    pub fn entry(&self, i: usize) -> c64 {
        if i == 0 {
            ONE
        } else {
            self.tail[i - 1]
        }
    }
}

/// Generates `H` with `H^H (alpha, x) = (beta, 0)`.
///
/// On return `x` holds the reflector tail. `beta` is real unless `x` is
/// already zero, in which case `tau = 0` and `beta = alpha`.
pub fn make_reflector(alpha: c64, x: &mut [c64]) -> (c64, c64) {
    let xnorm = x.iter().fold(0.0f64, |acc, z| acc.hypot(z.norm()));
    if xnorm == 0.0 {
        return (ZERO, alpha);
    }
    let mut beta = alpha.norm().hypot(xnorm);
    if alpha.re >= 0.0 {
        beta = -beta;
    }
    let tau = c64::new((beta - alpha.re) / beta, -alpha.im / beta);
    let scale = ONE / (alpha - beta);
    x.iter_mut().for_each(|z| *z *= scale);
    (tau, c64::new(beta, 0.0))
}

/// Which reduction produced a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    OneStage,
    BandReduction,
    BulgeChase,
}

/// A run of consecutive reflectors applied together as `I - V T V^H`.
#[derive(Clone, Debug, PartialEq)]
pub struct PanelBlock {
    pub start: usize,
    pub count: usize,
    /// Triangular factor, when the reduction already had it.
    pub t: Option<CMat>,
}

/// Position of a bulge-chasing reflector: the sweep (column being reduced)
/// and the chase step within that sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChaseTag {
    pub sweep: usize,
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Layout {
    Panels(Vec<PanelBlock>),
    /// Individually stored chase reflectors with the band width they came from.
    Chase { tags: Vec<ChaseTag>, bandwidth: usize },
}

/// Reflectors of one reduction stage plus the unit phase diagonal that turns
/// the complex tridiagonal into a real one (all ones for non-final stages).
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectorSet {
    pub stage: Stage,
    pub n: usize,
    pub reflectors: Vec<Reflector>,
    pub layout: Layout,
    pub phase: Vec<c64>,
}

impl ReflectorSet {
    pub fn identity(stage: Stage, n: usize) -> Self {
        Self {
            stage,
            n,
            reflectors: Vec::new(),
            layout: Layout::Panels(Vec::new()),
            phase: vec![ONE; n],
        }
    }

    pub fn has_phase(&self) -> bool {
        self.phase.iter().any(|&p| p != ONE)
    }

    /// Dense `V` for reflectors `idx` (in order) over rows `top .. top + rows`.
    pub(crate) fn dense_block(&self, idx: &[usize], top: usize, rows: usize) -> CMat {
        let mut v = CMat::zeros(rows, idx.len());
        for (q, &r) in idx.iter().enumerate() {
            let h = &self.reflectors[r];
            let col = v.col_mut(q);
            let start = h.offset - top;
            col[start] = ONE;
            col[start + 1..start + h.len()].copy_from_slice(&h.tail);
        }
        v
    }
}

/// Forward column-wise triangular factor: `H_0 ... H_{k-1} = I - V T V^H`.
///
/// `V^H V` is formed through the backend; the short recurrence stays on the host.
pub fn triangular_factor(v: &CMat, taus: &[c64], backend: &dyn Backend) -> Result<CMat> {
    let k = taus.len();
    let mut s = CMat::zeros(k, k);
    backend.multiply_accumulate(ONE, v.as_ref(), Op::ConjTrans, v.as_ref(), Op::NoTrans, ZERO, s.as_mut())?;
    let mut t = CMat::zeros(k, k);
    for j in 0..k {
        t[(j, j)] = taus[j];
        if taus[j] == ZERO {
            continue;
        }
        // t[0..j, j] = -tau_j * T[0..j, 0..j] * S[0..j, j]
        for i in 0..j {
            let mut acc = ZERO;
            for l in i..j {
                acc += t[(i, l)] * s[(l, j)];
            }
            t[(i, j)] = -taus[j] * acc;
        }
    }
    Ok(t)
}

/// `Y <- (I - V op(T) V^H) Y` through the backend.
pub(crate) fn apply_block(v: &CMat, t: &CMat, op_t: Op, mut y: MatMut<'_, c64>, backend: &dyn Backend) -> Result<()> {
    let (k, m) = (v.cols(), y.cols());
    if k == 0 || m == 0 {
        return Ok(());
    }
    let mut w = CMat::zeros(k, m);
    backend.multiply_accumulate(ONE, v.as_ref(), Op::ConjTrans, y.rb(), Op::NoTrans, ZERO, w.as_mut())?;
    let mut tw = CMat::zeros(k, m);
    backend.multiply_accumulate(ONE, t.as_ref(), op_t, w.as_ref(), Op::NoTrans, ZERO, tw.as_mut())?;
    backend.multiply_accumulate(-ONE, v.as_ref(), Op::NoTrans, tw.as_ref(), Op::NoTrans, ONE, y.rb_mut())?;
    Ok(())
}
