//! Reduction of `A x = lambda L L^H x` to the standard problem
//! `A' y = lambda y` with `A' = L^{-1} A L^{-H}`, and the matching
//! eigenvector map `x = L^{-H} y`.

use crate::backend::{Backend, Op, Overlap, Side};
use crate::error::{mismatch, Result};
use crate::matrix::{c64, CMat, DenseHermitian, MatMut, MatRef, TriangularFactor};

pub const DEFAULT_BLOCK: usize = 64;

const ONE: c64 = c64::new(1.0, 0.0);
const HALF: c64 = c64::new(0.5, 0.0);

/// Blocked two-sided update sweeping block columns left to right. `a` is
/// not modified.
pub fn transform_to_standard(
    a: &DenseHermitian,
    l: &TriangularFactor,
    block: usize,
    backend: &dyn Backend,
) -> Result<DenseHermitian> {
    let n = a.n();
    if l.n() != n {
        return Err(mismatch("transform_to_standard", format!("A is {n}x{n}, L is {0}x{0}", l.n())));
    }
    let nb = block.max(1);
    let lm = l.matrix();
    let mut w = a.matrix().clone();
    let mut k0 = 0;
    while k0 < n {
        let kb = nb.min(n - k0);
        reduce_diagonal_block(w.sub_mut(k0, k0, kb, kb), lm.sub(k0, k0, kb, kb));
        let rest = n - k0 - kb;
        if rest > 0 {
            let a11 = hermitian_block(w.sub(k0, k0, kb, kb));
            let l11 = lm.sub(k0, k0, kb, kb);
            let l21 = lm.sub(k0 + kb, k0, rest, kb);
            let l22 = lm.sub(k0 + kb, k0 + kb, rest, rest);
            let (left, right) = w.as_mut().split_cols(k0 + kb);
            let mut a21 = left.into_sub(k0 + kb, k0, rest, kb);
            let a22 = right.into_sub(k0 + kb, 0, rest, rest);

            backend.triangular_solve_multi(Side::Right, Op::ConjTrans, l11, a21.rb_mut())?;
            backend.multiply_accumulate(-HALF, l21, Op::NoTrans, a11.as_ref(), Op::NoTrans, ONE, a21.rb_mut())?;
            backend.hermitian_rank2_update(-ONE, a21.rb(), l21, 1.0, a22, Overlap::None)?;
            backend.multiply_accumulate(-HALF, l21, Op::NoTrans, a11.as_ref(), Op::NoTrans, ONE, a21.rb_mut())?;
            backend.triangular_solve_multi(Side::Left, Op::NoTrans, l22, a21.rb_mut())?;
        }
        k0 += kb;
    }
    DenseHermitian::from_lower(w)
}

/// `X = L^{-H} Y`.
pub fn backtransform_generalized(l: &TriangularFactor, y: &CMat, backend: &dyn Backend) -> Result<CMat> {
    if y.rows() != l.n() {
        return Err(mismatch(
            "backtransform_generalized",
            format!("L is {0}x{0}, Y has {1} rows", l.n(), y.rows()),
        ));
    }
    let mut x = y.clone();
    backend.triangular_solve_multi(Side::Left, Op::ConjTrans, l.matrix().as_ref(), x.as_mut())?;
    Ok(x)
}

fn hermitian_block(a: MatRef<'_, c64>) -> CMat {
    let n = a.rows();
    CMat::from_fn(n, n, |i, j| if i >= j { a.get(i, j) } else { a.get(j, i).conj() })
}

/// Unblocked congruence on a diagonal block, lower triangle only.
fn reduce_diagonal_block(mut a: MatMut<'_, c64>, l: MatRef<'_, c64>) {
    let n = a.rows();
    for k in 0..n {
        let bkk = l.get(k, k).re;
        let akk = a.get(k, k).re / (bkk * bkk);
        a.set(k, k, c64::new(akk, 0.0));
        if k + 1 == n {
            continue;
        }
        let ct = c64::new(-0.5 * akk, 0.0);
        for i in k + 1..n {
            let v = a.get(i, k) / bkk + ct * l.get(i, k);
            a.set(i, k, v);
        }
        // A22 -= a b^H + b a^H
        for j in k + 1..n {
            let (aj, bj) = (a.get(j, k).conj(), l.get(j, k).conj());
            for i in j..n {
                let v = a.get(i, j) - a.get(i, k) * bj - l.get(i, k) * aj;
                a.set(i, j, v);
            }
            let d = a.get(j, j);
            a.set(j, j, c64::new(d.re, 0.0));
        }
        for i in k + 1..n {
            let v = a.get(i, k) + ct * l.get(i, k);
            a.set(i, k, v);
        }
        // forward solve with the trailing part of L
        for i in k + 1..n {
            let mut s = a.get(i, k);
            for p in k + 1..i {
                s -= l.get(i, p) * a.get(p, k);
            }
            a.set(i, k, s / l.get(i, i));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::ReferenceBackend;

    #[test]
    fn identity_factor_is_noop() {
        let be = ReferenceBackend::new();
        let m = CMat::from_fn(5, 5, |i, j| c64::new((i + 2 * j) as f64, i as f64 - j as f64));
        let a = DenseHermitian::from_lower(m).unwrap();
        let ap = transform_to_standard(&a, &TriangularFactor::identity(5), 2, &be).unwrap();
        assert_eq!(ap, a);
    }

    #[test]
    fn diagonal_scaling() {
        let be = ReferenceBackend::new();
        let l = TriangularFactor::from_lower(CMat::from_fn(4, 4, |i, j| {
            if i == j {
                c64::new(2.0, 0.0)
            } else {
                c64::default()
            }
        }))
        .unwrap();
        let ap = transform_to_standard(&DenseHermitian::identity(4), &l, 3, &be).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 0.25 } else { 0.0 };
                assert_eq!(ap.matrix()[(i, j)], c64::new(expect, 0.0));
            }
        }
        let x = backtransform_generalized(&TriangularFactor::from_lower(CMat::from_fn(1, 1, |_, _| c64::new(2.0, 0.0))).unwrap(), &CMat::from_fn(1, 1, |_, _| ONE), &be).unwrap();
        assert_eq!(x[(0, 0)], c64::new(0.5, 0.0));
    }
}
