//! Blocked Cholesky factorization `B = L L^H`.

use crate::backend::{Backend, Op, Overlap, Side};
use crate::error::{Error, Result};
use crate::matrix::{c64, DenseHermitian, MatMut, TriangularFactor};

pub const DEFAULT_BLOCK: usize = 64;

/// Right-looking blocked factorization. Diagonal blocks are factored on the
/// host; the panel solve and trailing update go through the backend.
pub fn cholesky_factor(b: &DenseHermitian, block: usize, backend: &dyn Backend) -> Result<TriangularFactor> {
    let n = b.n();
    let nb = block.max(1);
    let mut a = b.matrix().clone();
    let mut k0 = 0;
    while k0 < n {
        let kb = nb.min(n - k0);
        factor_diagonal_block(a.sub_mut(k0, k0, kb, kb), k0)?;
        let rest = n - k0 - kb;
        if rest > 0 {
            let l11 = a.sub(k0, k0, kb, kb).to_owned();
            let (left, right) = a.as_mut().split_cols(k0 + kb);
            let mut l21 = left.into_sub(k0 + kb, k0, rest, kb);
            backend.triangular_solve_multi(Side::Right, Op::ConjTrans, l11.as_ref(), l21.rb_mut())?;
            let a22 = right.into_sub(k0 + kb, 0, rest, rest);
            backend.hermitian_rank_update(-1.0, l21.rb(), 1.0, a22, Overlap::None)?;
        }
        k0 += kb;
    }
    TriangularFactor::from_lower(a)
}

/// Unblocked lower Cholesky on a diagonal block; `base` offsets the
/// reported pivot index.
fn factor_diagonal_block(mut a: MatMut<'_, c64>, base: usize) -> Result<()> {
    let n = a.rows();
    for j in 0..n {
        let mut d = a.get(j, j).re;
        for p in 0..j {
            d -= a.get(j, p).norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot_index: base + j });
        }
        let ljj = d.sqrt();
        a.set(j, j, c64::new(ljj, 0.0));
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for p in 0..j {
                s -= a.get(i, p) * a.get(j, p).conj();
            }
            a.set(i, j, s / ljj);
        }
    }
    Ok(())
}
