//! Compute-backend boundary.
//!
//! Every matrix-matrix operation in the solver, and the matrix-vector work of
//! the one-stage reduction, goes through a [`Backend`]. This is the seam where
//! an accelerator would take over the level-3 work while panel factorizations,
//! secular roots and bulge chasing stay on the host.
//!
//! Backends count nominal flops: `8mnk` for a complex multiply-accumulate,
//! `2mnk` for a real one, `8mn` for a complex matrix-vector product.

mod kernels;
mod reference;

use std::collections::BTreeMap;
use std::ops::Sub;

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::matrix::{c64, MatMut, MatRef, TriangularFactor};

pub use reference::ReferenceBackend;

/// How an operand enters a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    NoTrans,
    Trans,
    ConjTrans,
}

impl Op {
    fn dims<T: Copy + Default>(self, m: &MatRef<'_, T>) -> (usize, usize) {
        match self {
            Op::NoTrans => (m.rows(), m.cols()),
            _ => (m.cols(), m.rows()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Hint on trailing updates: `Allowed` lets an implementation return before
/// the result is materialised, in which case [`Backend::fence`] must be called
/// before the output is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Overlap {
    #[default]
    None,
    Allowed,
}

/// Operation counters, split into matrix-vector and matrix-matrix classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendOpCounts {
    pub level2_flops: u64,
    pub level3_flops: u64,
    pub calls: BTreeMap<String, u64>,
}

impl BackendOpCounts {
    pub fn total_flops(&self) -> u64 {
        self.level2_flops + self.level3_flops
    }

    /// Share of matrix-vector flops; zero when nothing was counted.
    pub fn level2_fraction(&self) -> f64 {
        let t = self.total_flops();
        if t == 0 {
            0.0
        } else {
            self.level2_flops as f64 / t as f64
        }
    }
}

impl Sub for &BackendOpCounts {
    type Output = BackendOpCounts;

    fn sub(self, earlier: &BackendOpCounts) -> BackendOpCounts {
        let calls = self
            .calls
            .iter()
            .map(|(k, &v)| (k.clone(), v - earlier.calls.get(k).copied().unwrap_or(0)))
            .filter(|(_, v)| *v > 0)
            .collect();
        BackendOpCounts {
            level2_flops: self.level2_flops - earlier.level2_flops,
            level3_flops: self.level3_flops - earlier.level3_flops,
            calls,
        }
    }
}

/// The operations the solver offloads. Implementations must be usable from
/// several threads and keep their counters consistent per call.
pub trait Backend: Send + Sync {
    fn name(&self) -> &str;

    /// `C <- alpha op(A) op(B) + beta C`.
    fn multiply_accumulate(
        &self,
        alpha: c64,
        a: MatRef<'_, c64>,
        op_a: Op,
        b: MatRef<'_, c64>,
        op_b: Op,
        beta: c64,
        c: MatMut<'_, c64>,
    ) -> Result<()>;

    /// Real `C <- alpha op(A) op(B) + beta C`, used for tridiagonal eigenvector updates.
    fn multiply_accumulate_real(
        &self,
        alpha: f64,
        a: MatRef<'_, f64>,
        op_a: Op,
        b: MatRef<'_, f64>,
        op_b: Op,
        beta: f64,
        c: MatMut<'_, f64>,
    ) -> Result<()>;

    /// `y <- alpha op(A) x + beta y`.
    fn matvec_accumulate(&self, alpha: c64, a: MatRef<'_, c64>, op_a: Op, x: &[c64], beta: c64, y: &mut [c64]) -> Result<()>;

    /// `y <- alpha A x + beta y`, `A` Hermitian given by its lower triangle.
    fn hermitian_matvec(&self, alpha: c64, a: MatRef<'_, c64>, x: &[c64], beta: c64, y: &mut [c64]) -> Result<()>;

    /// `C <- alpha A B + beta C`, `A` Hermitian given by its lower triangle.
    fn hermitian_multiply(&self, alpha: c64, a: MatRef<'_, c64>, b: MatRef<'_, c64>, beta: c64, c: MatMut<'_, c64>) -> Result<()>;

    /// Lower triangle of `C <- alpha V V^H + beta C`.
    fn hermitian_rank_update(&self, alpha: f64, v: MatRef<'_, c64>, beta: f64, c: MatMut<'_, c64>, hint: Overlap) -> Result<()>;

    /// Lower triangle of `C <- alpha V W^H + conj(alpha) W V^H + beta C`.
    fn hermitian_rank2_update(
        &self,
        alpha: c64,
        v: MatRef<'_, c64>,
        w: MatRef<'_, c64>,
        beta: f64,
        c: MatMut<'_, c64>,
        hint: Overlap,
    ) -> Result<()>;

    /// Overwrites `X` with `op(L)^{-1} X` (left) or `X op(L)^{-1}` (right),
    /// `L` lower triangular with non-zero diagonal.
    fn triangular_solve_multi(&self, side: Side, op: Op, l: MatRef<'_, c64>, x: MatMut<'_, c64>) -> Result<()>;

    /// Waits for outstanding overlapped work.
    fn fence(&self) {}

    fn counts(&self) -> BackendOpCounts;

    fn reset_counts(&self);
}

/// `X <- op(L)^{-1} X` or `X op(L)^{-1}` for a Cholesky factor.
pub fn solve_with_factor(backend: &dyn Backend, l: &TriangularFactor, side: Side, op: Op, x: MatMut<'_, c64>) -> Result<()> {
    backend.triangular_solve_multi(side, op, l.matrix().as_ref(), x)
}

/// Names accepted by [`create`].
pub const BACKENDS: &[&str] = &["reference"];

pub fn create(name: &str) -> Result<Box<dyn Backend>> {
    match name {
        "reference" => Ok(Box::new(ReferenceBackend::new())),
        other => Err(Error::UnknownBackend(other.to_string())),
    }
}

pub(crate) fn check_gemm<T: Copy + Default>(
    a: &MatRef<'_, T>,
    op_a: Op,
    b: &MatRef<'_, T>,
    op_b: Op,
    c: &MatMut<'_, T>,
) -> Result<(usize, usize, usize)> {
    let (m, k) = op_a.dims(a);
    let (k2, n) = op_b.dims(b);
    if k != k2 || c.rows() != m || c.cols() != n {
        return Err(mismatch(
            "multiply_accumulate",
            format!("op(A) {m}x{k}, op(B) {k2}x{n}, C {}x{}", c.rows(), c.cols()),
        ));
    }
    Ok((m, n, k))
}
