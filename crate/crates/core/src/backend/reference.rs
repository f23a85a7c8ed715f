use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use super::{check_gemm, kernels, Backend, BackendOpCounts, Op, Overlap, Side};
use crate::error::{mismatch, Result};
use crate::matrix::{c64, MatMut, MatRef};

#[derive(Clone, Copy)]
enum Class {
    Level2,
    Level3,
}

/// Host implementation with instrumented counters.
///
/// Every kernel runs in a fixed order, so results are bit-for-bit repeatable
/// for identical inputs. Overlap hints are ignored: each call returns with
/// its output fully written.
#[derive(Default)]
pub struct ReferenceBackend {
    level2: AtomicU64,
    level3: AtomicU64,
    calls: Mutex<std::collections::BTreeMap<String, u64>>,
}

impl ReferenceBackend {
    pub fn new() -> Self {
        Self::default()
    }

    fn record(&self, op: &str, class: Class, flops: u64) {
        // Hold the lock across both updates so a snapshot never sees half a call.
        let mut calls = self.calls.lock().unwrap();
        *calls.entry(op.to_string()).or_insert(0) += 1;
        match class {
            Class::Level2 => self.level2.fetch_add(flops, Ordering::Relaxed),
            Class::Level3 => self.level3.fetch_add(flops, Ordering::Relaxed),
        };
    }
}

impl Backend for ReferenceBackend {
    fn name(&self) -> &str {
        "reference"
    }

    fn multiply_accumulate(
        &self,
        alpha: c64,
        a: MatRef<'_, c64>,
        op_a: Op,
        b: MatRef<'_, c64>,
        op_b: Op,
        beta: c64,
        c: MatMut<'_, c64>,
    ) -> Result<()> {
        let (m, n, k) = check_gemm(&a, op_a, &b, op_b, &c)?;
        kernels::gemm(alpha, a, op_a, b, op_b, beta, c);
        self.record("multiply_accumulate", Class::Level3, 8 * (m * n * k) as u64);
        Ok(())
    }

    fn multiply_accumulate_real(
        &self,
        alpha: f64,
        a: MatRef<'_, f64>,
        op_a: Op,
        b: MatRef<'_, f64>,
        op_b: Op,
        beta: f64,
        c: MatMut<'_, f64>,
    ) -> Result<()> {
        let (m, n, k) = check_gemm(&a, op_a, &b, op_b, &c)?;
        kernels::gemm_real(alpha, a, op_a, b, op_b, beta, c);
        self.record("multiply_accumulate_real", Class::Level3, 2 * (m * n * k) as u64);
        Ok(())
    }

    fn matvec_accumulate(&self, alpha: c64, a: MatRef<'_, c64>, op_a: Op, x: &[c64], beta: c64, y: &mut [c64]) -> Result<()> {
        let (m, n) = op_a.dims(&a);
        if x.len() != n || y.len() != m {
            return Err(mismatch(
                "matvec_accumulate",
                format!("op(A) {m}x{n}, x {}, y {}", x.len(), y.len()),
            ));
        }
        kernels::gemv(alpha, a, op_a, x, beta, y);
        self.record("matvec_accumulate", Class::Level2, 8 * (m * n) as u64);
        Ok(())
    }

    fn hermitian_matvec(&self, alpha: c64, a: MatRef<'_, c64>, x: &[c64], beta: c64, y: &mut [c64]) -> Result<()> {
        let n = a.rows();
        if a.cols() != n || x.len() != n || y.len() != n {
            return Err(mismatch(
                "hermitian_matvec",
                format!("A {}x{}, x {}, y {}", a.rows(), a.cols(), x.len(), y.len()),
            ));
        }
        kernels::hemv(alpha, a, x, beta, y);
        self.record("hermitian_matvec", Class::Level2, 8 * (n * n) as u64);
        Ok(())
    }

    fn hermitian_multiply(&self, alpha: c64, a: MatRef<'_, c64>, b: MatRef<'_, c64>, beta: c64, c: MatMut<'_, c64>) -> Result<()> {
        let m = a.rows();
        if a.cols() != m || b.rows() != m || c.rows() != m || c.cols() != b.cols() {
            return Err(mismatch(
                "hermitian_multiply",
                format!("A {}x{}, B {}x{}, C {}x{}", a.rows(), a.cols(), b.rows(), b.cols(), c.rows(), c.cols()),
            ));
        }
        let n = b.cols();
        kernels::hemm(alpha, a, b, beta, c);
        self.record("hermitian_multiply", Class::Level3, 8 * (m * m * n) as u64);
        Ok(())
    }

    fn hermitian_rank_update(&self, alpha: f64, v: MatRef<'_, c64>, beta: f64, c: MatMut<'_, c64>, _hint: Overlap) -> Result<()> {
        let n = c.rows();
        if c.cols() != n || v.rows() != n {
            return Err(mismatch(
                "hermitian_rank_update",
                format!("V {}x{}, C {}x{}", v.rows(), v.cols(), c.rows(), c.cols()),
            ));
        }
        let k = v.cols();
        kernels::herk(alpha, v, beta, c);
        self.record("hermitian_rank_update", Class::Level3, 4 * (n * n * k) as u64);
        Ok(())
    }

    fn hermitian_rank2_update(
        &self,
        alpha: c64,
        v: MatRef<'_, c64>,
        w: MatRef<'_, c64>,
        beta: f64,
        c: MatMut<'_, c64>,
        _hint: Overlap,
    ) -> Result<()> {
        let n = c.rows();
        if c.cols() != n || v.rows() != n || w.rows() != n || v.cols() != w.cols() {
            return Err(mismatch(
                "hermitian_rank2_update",
                format!("V {}x{}, W {}x{}, C {}x{}", v.rows(), v.cols(), w.rows(), w.cols(), c.rows(), c.cols()),
            ));
        }
        let k = v.cols();
        kernels::her2k(alpha, v, w, beta, c);
        self.record("hermitian_rank2_update", Class::Level3, 8 * (n * n * k) as u64);
        Ok(())
    }

    fn triangular_solve_multi(&self, side: Side, op: Op, l: MatRef<'_, c64>, x: MatMut<'_, c64>) -> Result<()> {
        let m = l.rows();
        let other = match side {
            Side::Left => x.rows(),
            Side::Right => x.cols(),
        };
        if l.cols() != m || other != m {
            return Err(mismatch(
                "triangular_solve_multi",
                format!("L {}x{}, X {}x{} ({side:?})", l.rows(), l.cols(), x.rows(), x.cols()),
            ));
        }
        let n = match side {
            Side::Left => x.cols(),
            Side::Right => x.rows(),
        };
        kernels::trsm(side, op, l, x);
        self.record("triangular_solve_multi", Class::Level3, 4 * (m * m * n) as u64);
        Ok(())
    }

    fn counts(&self) -> BackendOpCounts {
        let calls = self.calls.lock().unwrap();
        BackendOpCounts {
            level2_flops: self.level2.load(Ordering::Relaxed),
            level3_flops: self.level3.load(Ordering::Relaxed),
            calls: calls.clone(),
        }
    }

    fn reset_counts(&self) {
        let mut calls = self.calls.lock().unwrap();
        calls.clear();
        self.level2.store(0, Ordering::Relaxed);
        self.level3.store(0, Ordering::Relaxed);
    }
}
