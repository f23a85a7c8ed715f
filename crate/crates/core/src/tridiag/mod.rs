//! Reduction of a dense Hermitian matrix to real symmetric tridiagonal form,
//! either directly or through an intermediate band matrix.

mod band;
mod chase;
mod one_stage;

pub use band::reduce_to_band;
pub use chase::bulge_chase;
pub use one_stage::tridiagonalize_one_stage;

use crate::backend::{Backend, BackendOpCounts};
use crate::error::Result;
use crate::matrix::{c64, DenseHermitian, RealSymTridiagonal};
use crate::reflector::{ReflectorSet, Stage};

pub const DEFAULT_PANEL: usize = 8;
pub const DEFAULT_BAND: usize = 64;

/// Tridiagonal matrix plus the reflector sets that produced it, in the order
/// they were applied during the reduction.
#[derive(Clone, Debug)]
pub struct TridiagResult {
    pub t: RealSymTridiagonal,
    pub stages: Vec<ReflectorSet>,
    pub band_width: Option<usize>,
    /// Backend work recorded by each stage.
    pub stage_counts: Vec<BackendOpCounts>,
}

impl TridiagResult {
    /// Level-2 share of all backend flops spent in the reduction.
    pub fn level2_fraction(&self) -> f64 {
        let l2: u64 = self.stage_counts.iter().map(|c| c.level2_flops).sum();
        let l3: u64 = self.stage_counts.iter().map(|c| c.level3_flops).sum();
        if l2 + l3 == 0 {
            0.0
        } else {
            l2 as f64 / (l2 + l3) as f64
        }
    }
}

/// Band reduction followed by bulge chasing. `b` is clamped to `n - 1`.
pub fn tridiagonalize_two_stage(ap: &DenseHermitian, b: usize, backend: &dyn Backend) -> Result<TridiagResult> {
    let n = ap.n();
    if n == 1 {
        let t = RealSymTridiagonal::new(vec![ap.matrix()[(0, 0)].re], Vec::new())?;
        return Ok(TridiagResult {
            t,
            stages: vec![ReflectorSet::identity(Stage::BandReduction, 1), ReflectorSet::identity(Stage::BulgeChase, 1)],
            band_width: Some(0),
            stage_counts: vec![BackendOpCounts::default(); 2],
        });
    }
    let b = b.clamp(1, n - 1);
    let before = backend.counts();
    let (band, s1) = reduce_to_band(ap, b, backend)?;
    let mid = backend.counts();
    let (t, s2) = bulge_chase(&band)?;
    let after = backend.counts();
    Ok(TridiagResult {
        t,
        stages: vec![s1, s2],
        band_width: Some(b),
        stage_counts: vec![&mid - &before, &after - &mid],
    })
}

/// Folds the phases of a complex sub-diagonal into a unit diagonal `D` so
/// that `D^H T_c D` is real with non-negative off-diagonal.
pub(crate) fn realify(d: Vec<f64>, sub: &[c64]) -> Result<(RealSymTridiagonal, Vec<c64>)> {
    let n = d.len();
    let mut phase = vec![c64::new(1.0, 0.0); n];
    let mut e = Vec::with_capacity(sub.len());
    for (i, &s) in sub.iter().enumerate() {
        let a = s.norm();
        e.push(a);
        phase[i + 1] = if a == 0.0 {
            c64::new(1.0, 0.0)
        } else {
            let p = phase[i] * (s / a);
            p / p.norm()
        };
    }
    Ok((RealSymTridiagonal::new(d, e)?, phase))
}
