//! Plain host kernels behind the reference backend. No counting here.

use crate::matrix::{c64, MatMut, MatRef};

use super::{Op, Side};

const ZERO: c64 = c64::new(0.0, 0.0);

#[inline]
fn conj_if(z: c64, conj: bool) -> c64 {
    if conj {
        z.conj()
    } else {
        z
    }
}

fn four_cols_mut<'a, T: Copy + Default>(c: &'a mut MatMut<'_, T>, j: usize) -> [&'a mut [T]; 4] {
    let (_, rest) = c.rb_mut().split_cols(j);
    let (c0, rest) = rest.split_cols(1);
    let (c1, rest) = rest.split_cols(1);
    let (c2, c3) = rest.split_cols(1);
    [c0.into_col(0), c1.into_col(0), c2.into_col(0), c3.into_col(0)]
}

fn scale_cols<T: Copy + Default + std::ops::MulAssign + PartialEq>(c: &mut MatMut<'_, T>, beta: T, zero: T, one: T) {
    if beta == one {
        return;
    }
    for j in 0..c.cols() {
        let col = c.col_mut(j);
        if beta == zero {
            col.fill(zero);
        } else {
            col.iter_mut().for_each(|x| *x *= beta);
        }
    }
}

/// Materialises `op(M)` as an owned column-major buffer when it is not plain.
fn materialise(m: MatRef<'_, c64>, op: Op) -> crate::CMat {
    match op {
        Op::NoTrans => m.to_owned(),
        Op::Trans => crate::CMat::from_fn(m.cols(), m.rows(), |i, j| m.get(j, i)),
        Op::ConjTrans => crate::CMat::from_fn(m.cols(), m.rows(), |i, j| m.get(j, i).conj()),
    }
}

/// `C <- alpha op(A) op(B) + beta C`. Dimensions are checked by the caller.
pub fn gemm(alpha: c64, a: MatRef<'_, c64>, op_a: Op, b: MatRef<'_, c64>, op_b: Op, beta: c64, mut c: MatMut<'_, c64>) {
    let one = c64::new(1.0, 0.0);
    scale_cols(&mut c, beta, ZERO, one);
    let k = if op_a == Op::NoTrans { a.cols() } else { a.rows() };
    if alpha == ZERO || k == 0 || c.rows() == 0 || c.cols() == 0 {
        return;
    }
    let b_owned;
    let b = if op_b == Op::NoTrans {
        b
    } else {
        b_owned = materialise(b, op_b);
        b_owned.as_ref()
    };
    let (m, n) = (c.rows(), c.cols());
    match op_a {
        Op::NoTrans => {
            let mut j = 0;
            while j + 4 <= n {
                let [c0, c1, c2, c3] = four_cols_mut(&mut c, j);
                for l in 0..k {
                    let al = a.col(l);
                    let s = [
                        alpha * b.get(l, j),
                        alpha * b.get(l, j + 1),
                        alpha * b.get(l, j + 2),
                        alpha * b.get(l, j + 3),
                    ];
                    if s.iter().all(|x| *x == ZERO) {
                        continue;
                    }
                    for i in 0..m {
                        let x = al[i];
                        c0[i] += x * s[0];
                        c1[i] += x * s[1];
                        c2[i] += x * s[2];
                        c3[i] += x * s[3];
                    }
                }
                j += 4;
            }
            for j in j..n {
                for l in 0..k {
                    let s = alpha * b.get(l, j);
                    if s == ZERO {
                        continue;
                    }
                    let al = a.col(l);
                    for (ci, &x) in c.col_mut(j).iter_mut().zip(al) {
                        *ci += x * s;
                    }
                }
            }
        }
        Op::Trans | Op::ConjTrans => {
            let conj = op_a == Op::ConjTrans;
            let mut j = 0;
            while j < n {
                let jb = (n - j).min(4);
                let bcols: Vec<&[c64]> = (0..jb).map(|q| b.col(j + q)).collect();
                for i in 0..m {
                    let ai = a.col(i);
                    let mut acc = [ZERO; 4];
                    for l in 0..k {
                        let x = conj_if(ai[l], conj);
                        for q in 0..jb {
                            acc[q] += x * bcols[q][l];
                        }
                    }
                    for q in 0..jb {
                        c[(i, j + q)] += alpha * acc[q];
                    }
                }
                j += jb;
            }
        }
    }
}

/// Real `C <- alpha op(A) op(B) + beta C` (conjugation is meaningless here).
pub fn gemm_real(alpha: f64, a: MatRef<'_, f64>, op_a: Op, b: MatRef<'_, f64>, op_b: Op, beta: f64, mut c: MatMut<'_, f64>) {
    scale_cols(&mut c, beta, 0.0, 1.0);
    let k = if op_a == Op::NoTrans { a.cols() } else { a.rows() };
    if alpha == 0.0 || k == 0 || c.rows() == 0 || c.cols() == 0 {
        return;
    }
    let b_owned;
    let b = if op_b == Op::NoTrans {
        b
    } else {
        b_owned = crate::RMat::from_fn(b.cols(), b.rows(), |i, j| b.get(j, i));
        b_owned.as_ref()
    };
    let (m, n) = (c.rows(), c.cols());
    match op_a {
        Op::NoTrans => {
            let mut j = 0;
            while j + 4 <= n {
                let [c0, c1, c2, c3] = four_cols_mut(&mut c, j);
                for l in 0..k {
                    let al = a.col(l);
                    let s = [
                        alpha * b.get(l, j),
                        alpha * b.get(l, j + 1),
                        alpha * b.get(l, j + 2),
                        alpha * b.get(l, j + 3),
                    ];
                    for i in 0..m {
                        let x = al[i];
                        c0[i] += x * s[0];
                        c1[i] += x * s[1];
                        c2[i] += x * s[2];
                        c3[i] += x * s[3];
                    }
                }
                j += 4;
            }
            for j in j..n {
                for l in 0..k {
                    let s = alpha * b.get(l, j);
                    let al = a.col(l);
                    for (ci, &x) in c.col_mut(j).iter_mut().zip(al) {
                        *ci += x * s;
                    }
                }
            }
        }
        Op::Trans | Op::ConjTrans => {
            for j in 0..n {
                let bj = b.col(j);
                for i in 0..m {
                    let ai = a.col(i);
                    let dot: f64 = ai.iter().zip(bj).map(|(x, y)| x * y).sum();
                    c[(i, j)] += alpha * dot;
                }
            }
        }
    }
}

/// `y <- alpha op(A) x + beta y`.
pub fn gemv(alpha: c64, a: MatRef<'_, c64>, op_a: Op, x: &[c64], beta: c64, y: &mut [c64]) {
    if beta == ZERO {
        y.fill(ZERO);
    } else if beta != c64::new(1.0, 0.0) {
        y.iter_mut().for_each(|v| *v *= beta);
    }
    if alpha == ZERO {
        return;
    }
    match op_a {
        Op::NoTrans => {
            for (l, &xl) in x.iter().enumerate() {
                let s = alpha * xl;
                if s == ZERO {
                    continue;
                }
                for (yi, &ai) in y.iter_mut().zip(a.col(l)) {
                    *yi += ai * s;
                }
            }
        }
        Op::Trans | Op::ConjTrans => {
            let conj = op_a == Op::ConjTrans;
            for (i, yi) in y.iter_mut().enumerate() {
                let mut acc = ZERO;
                for (&ai, &xl) in a.col(i).iter().zip(x) {
                    acc += conj_if(ai, conj) * xl;
                }
                *yi += alpha * acc;
            }
        }
    }
}

/// `y <- alpha A x + beta y` with `A` Hermitian, read from its lower triangle.
pub fn hemv(alpha: c64, a: MatRef<'_, c64>, x: &[c64], beta: c64, y: &mut [c64]) {
    if beta == ZERO {
        y.fill(ZERO);
    } else if beta != c64::new(1.0, 0.0) {
        y.iter_mut().for_each(|v| *v *= beta);
    }
    if alpha == ZERO {
        return;
    }
    let n = a.rows();
    for l in 0..n {
        let col = &a.col(l)[l..];
        let s = alpha * x[l];
        let mut dot = ZERO;
        y[l] += s * col[0].re;
        for (q, &ail) in col.iter().enumerate().skip(1) {
            let i = l + q;
            y[i] += ail * s;
            dot += ail.conj() * x[i];
        }
        y[l] += alpha * dot;
    }
}

/// `C <- alpha A B + beta C` with `A` Hermitian (lower triangle) on the left.
pub fn hemm(alpha: c64, a: MatRef<'_, c64>, b: MatRef<'_, c64>, beta: c64, mut c: MatMut<'_, c64>) {
    let one = c64::new(1.0, 0.0);
    scale_cols(&mut c, beta, ZERO, one);
    if alpha == ZERO {
        return;
    }
    let m = a.rows();
    let n = b.cols();
    let mut j = 0;
    while j < n {
        let jb = (n - j).min(4);
        let bcols: Vec<&[c64]> = (0..jb).map(|q| b.col(j + q)).collect();
        let mut acc = vec![ZERO; m * jb];
        for l in 0..m {
            let col = &a.col(l)[l..];
            let d = col[0].re;
            let mut s = [ZERO; 4];
            for q in 0..jb {
                s[q] = bcols[q][l];
                acc[q * m + l] += s[q] * d;
            }
            let mut dots = [ZERO; 4];
            for (p, &ail) in col.iter().enumerate().skip(1) {
                let i = l + p;
                let aic = ail.conj();
                for q in 0..jb {
                    acc[q * m + i] += ail * s[q];
                    dots[q] += aic * bcols[q][i];
                }
            }
            for q in 0..jb {
                acc[q * m + l] += dots[q];
            }
        }
        for q in 0..jb {
            for (ci, &v) in c.col_mut(j + q).iter_mut().zip(&acc[q * m..(q + 1) * m]) {
                *ci += alpha * v;
            }
        }
        j += jb;
    }
}

/// Lower triangle of `C <- alpha V V^H + beta C`.
pub fn herk(alpha: f64, v: MatRef<'_, c64>, beta: f64, mut c: MatMut<'_, c64>) {
    let n = c.rows();
    for j in 0..n {
        let col = &mut c.col_mut(j)[j..];
        if beta == 0.0 {
            col.fill(ZERO);
        } else if beta != 1.0 {
            col.iter_mut().for_each(|x| *x *= beta);
        }
        if alpha != 0.0 {
            for l in 0..v.cols() {
                let s = v.get(j, l).conj() * alpha;
                if s == ZERO {
                    continue;
                }
                for (ci, &x) in col.iter_mut().zip(&v.col(l)[j..]) {
                    *ci += x * s;
                }
            }
        }
        col[0].im = 0.0;
    }
}

/// Lower triangle of `C <- alpha V W^H + conj(alpha) W V^H + beta C`.
pub fn her2k(alpha: c64, v: MatRef<'_, c64>, w: MatRef<'_, c64>, beta: f64, mut c: MatMut<'_, c64>) {
    let n = c.rows();
    for j in 0..n {
        let col = &mut c.col_mut(j)[j..];
        if beta == 0.0 {
            col.fill(ZERO);
        } else if beta != 1.0 {
            col.iter_mut().for_each(|x| *x *= beta);
        }
        if alpha != ZERO {
            for l in 0..v.cols() {
                let s1 = alpha * w.get(j, l).conj();
                let s2 = alpha.conj() * v.get(j, l).conj();
                let (vl, wl) = (&v.col(l)[j..], &w.col(l)[j..]);
                for ((ci, &x), &y) in col.iter_mut().zip(vl).zip(wl) {
                    *ci += x * s1 + y * s2;
                }
            }
        }
        col[0].im = 0.0;
    }
}

/// Solves with the lower-triangular `l` (non-unit diagonal) in place.
pub fn trsm(side: Side, op: Op, l: MatRef<'_, c64>, mut x: MatMut<'_, c64>) {
    let m = l.rows();
    let conj = op == Op::ConjTrans;
    match (side, op) {
        (Side::Left, Op::NoTrans) => {
            for j in 0..x.cols() {
                let xc = x.col_mut(j);
                for i in 0..m {
                    let xi = xc[i] / l.get(i, i);
                    xc[i] = xi;
                    if xi == ZERO {
                        continue;
                    }
                    for (xr, &lr) in xc[i + 1..].iter_mut().zip(&l.col(i)[i + 1..]) {
                        *xr -= lr * xi;
                    }
                }
            }
        }
        (Side::Left, _) => {
            for j in 0..x.cols() {
                let xc = x.col_mut(j);
                for i in (0..m).rev() {
                    let mut acc = xc[i];
                    for (&xr, &lr) in xc[i + 1..].iter().zip(&l.col(i)[i + 1..]) {
                        acc -= conj_if(lr, conj) * xr;
                    }
                    xc[i] = acc / conj_if(l.get(i, i), conj);
                }
            }
        }
        (Side::Right, Op::NoTrans) => {
            // Z L = X, columns from the right.
            for jj in (0..m).rev() {
                for p in jj + 1..m {
                    let s = l.get(p, jj);
                    if s == ZERO {
                        continue;
                    }
                    let (left, right) = x.rb_mut().split_cols(p);
                    let mut left = left;
                    let src = right.col(0);
                    for (d, &z) in left.col_mut(jj).iter_mut().zip(src) {
                        *d -= z * s;
                    }
                }
                let inv = c64::new(1.0, 0.0) / l.get(jj, jj);
                x.col_mut(jj).iter_mut().for_each(|v| *v *= inv);
            }
        }
        (Side::Right, _) => {
            // Z op(L) = X with op(L) upper triangular, columns from the left.
            for jj in 0..m {
                for p in 0..jj {
                    let s = conj_if(l.get(jj, p), conj);
                    if s == ZERO {
                        continue;
                    }
                    let (left, mut right) = x.rb_mut().split_cols(jj);
                    let src = left.col(p);
                    for (d, &z) in right.col_mut(0).iter_mut().zip(src) {
                        *d -= z * s;
                    }
                }
                let inv = c64::new(1.0, 0.0) / conj_if(l.get(jj, jj), conj);
                x.col_mut(jj).iter_mut().for_each(|v| *v *= inv);
            }
        }
    }
}
