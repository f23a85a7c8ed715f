//! End-to-end drivers for the standard and generalized problems.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::backend::{Backend, BackendOpCounts};
use crate::backtransform::backtransform_standard;
use crate::cholesky::cholesky_factor;
use crate::dc::dc_solve_with_base;
use crate::error::{mismatch, Error, Result};
use crate::matrix::{DenseHermitian, EigenDecomposition, EigenSelection, SolveMeta, Step, StepRecord};
use crate::transform::{backtransform_generalized, transform_to_standard};
use crate::tridiag::{tridiagonalize_one_stage, tridiagonalize_two_stage, TridiagResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    OneStage,
    TwoStage,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::OneStage, Method::TwoStage];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::OneStage => "one-stage",
            Method::TwoStage => "two-stage",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-stage" => Ok(Method::OneStage),
            "two-stage" => Ok(Method::TwoStage),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// Block sizes and tolerances of a solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub cholesky_block: usize,
    pub transform_block: usize,
    pub panel_width: usize,
    pub band_width: usize,
    pub dc_base: usize,
    /// Residual bound is `residual_factor * n * eps` times the problem scale.
    pub residual_factor: f64,
    /// Orthogonality bound is `orthogonality_factor * n * eps`.
    pub orthogonality_factor: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            cholesky_block: crate::cholesky::DEFAULT_BLOCK,
            transform_block: crate::transform::DEFAULT_BLOCK,
            panel_width: crate::tridiag::DEFAULT_PANEL,
            band_width: crate::tridiag::DEFAULT_BAND,
            dc_base: crate::dc::DEFAULT_BASE,
            residual_factor: 100.0,
            orthogonality_factor: 100.0,
        }
    }
}

impl Config {
    pub fn residual_tolerance(&self, n: usize) -> f64 {
        self.residual_factor * n as f64 * f64::EPSILON
    }

    pub fn orthogonality_tolerance(&self, n: usize) -> f64 {
        self.orthogonality_factor * n as f64 * f64::EPSILON
    }
}

struct Recorder<'a> {
    backend: &'a dyn Backend,
    start: BackendOpCounts,
    steps: Vec<StepRecord>,
}

impl<'a> Recorder<'a> {
    fn new(backend: &'a dyn Backend) -> Self {
        Self {
            backend,
            start: backend.counts(),
            steps: Vec::new(),
        }
    }

    fn run<T>(&mut self, step: Step, f: impl FnOnce(&dyn Backend) -> Result<T>) -> Result<T> {
        let before = self.backend.counts();
        let t0 = Instant::now();
        let out = f(self.backend)?;
        let seconds = t0.elapsed().as_secs_f64();
        let delta = &self.backend.counts() - &before;
        self.steps.push(StepRecord {
            step: Some(step),
            seconds,
            level2_flops: delta.level2_flops,
            level3_flops: delta.level3_flops,
        });
        Ok(out)
    }

    fn finish(self, method: Method) -> SolveMeta {
        SolveMeta {
            method: method.to_string(),
            counts: &self.backend.counts() - &self.start,
            steps: self.steps,
        }
    }
}

fn reduce(ap: &DenseHermitian, method: Method, config: &Config, backend: &dyn Backend) -> Result<TridiagResult> {
    match method {
        Method::OneStage => tridiagonalize_one_stage(ap, config.panel_width, backend),
        Method::TwoStage => tridiagonalize_two_stage(ap, config.band_width, backend),
    }
}

fn solve_standard_recorded(
    ap: &DenseHermitian,
    sel: &EigenSelection,
    method: Method,
    config: &Config,
    rec: &mut Recorder<'_>,
) -> Result<(Vec<f64>, Option<crate::matrix::CMat>, (usize, usize))> {
    sel.resolve(ap.n())?;
    let tri = rec.run(Step::Tridiag, |be| reduce(ap, method, config, be))?;
    let dc = rec.run(Step::Dc, |be| dc_solve_with_base(&tri.t, sel, config.dc_base, be))?;
    let values = dc.selected_values().to_vec();
    let vectors = match &dc.vectors {
        Some(yp) => Some(rec.run(Step::Backtransform, |be| backtransform_standard(&tri, yp, be))?),
        None => None,
    };
    Ok((values, vectors, dc.range))
}

/// Eigenpairs of a Hermitian matrix.
pub fn solve_standard(
    ap: &DenseHermitian,
    sel: &EigenSelection,
    method: Method,
    config: &Config,
    backend: &dyn Backend,
) -> Result<EigenDecomposition> {
    let mut rec = Recorder::new(backend);
    let (values, vectors, range) = solve_standard_recorded(ap, sel, method, config, &mut rec)?;
    Ok(EigenDecomposition {
        values,
        vectors,
        range,
        meta: rec.finish(method),
    })
}

/// Eigenpairs of `A x = lambda B x` with `B` positive definite.
pub fn solve_generalized(
    a: &DenseHermitian,
    b: &DenseHermitian,
    sel: &EigenSelection,
    method: Method,
    config: &Config,
    backend: &dyn Backend,
) -> Result<EigenDecomposition> {
    if a.n() != b.n() {
        return Err(mismatch("solve_generalized", format!("A is {0}x{0}, B is {1}x{1}", a.n(), b.n())));
    }
    sel.resolve(a.n())?;
    let mut rec = Recorder::new(backend);
    let l = rec.run(Step::Cholesky, |be| cholesky_factor(b, config.cholesky_block, be))?;
    let ap = rec.run(Step::Transform, |be| transform_to_standard(a, &l, config.transform_block, be))?;
    let (values, y, range) = solve_standard_recorded(&ap, sel, method, config, &mut rec)?;
    let vectors = match y {
        Some(y) => Some(rec.run(Step::BacktransformGeneralized, |be| backtransform_generalized(&l, &y, be))?),
        None => None,
    };
    Ok(EigenDecomposition {
        values,
        vectors,
        range,
        meta: rec.finish(method),
    })
}
