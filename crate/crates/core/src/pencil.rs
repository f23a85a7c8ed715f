//! Seeded random Hermitian-definite pencils for tests and benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{c64, symmetrize, CMat, DenseHermitian};
use crate::reflector::make_reflector;

fn gaussian(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64::new(re, im)
    })
}

/// Unitary factor of a Householder QR of `m`.
pub fn unitary_from(m: &CMat) -> CMat {
    let n = m.rows();
    let mut a = m.clone();
    let mut q = CMat::identity(n);
    let mut refl = Vec::with_capacity(n);
    for j in 0..n {
        let col = a.col_mut(j);
        let (head, tail) = col[j..].split_at_mut(1);
        let (tau, beta) = make_reflector(head[0], tail);
        head[0] = beta;
        let v: Vec<c64> = std::iter::once(c64::new(1.0, 0.0)).chain(tail.iter().copied()).collect();
        for k in j + 1..n {
            let c = &mut a.col_mut(k)[j..];
            let dot: c64 = v.iter().zip(c.iter()).map(|(x, y)| x.conj() * y).sum();
            let f = tau.conj() * dot;
            c.iter_mut().zip(&v).for_each(|(y, x)| *y -= f * x);
        }
        refl.push((j, tau, v));
    }
    for (j, tau, v) in refl.into_iter().rev() {
        for k in 0..n {
            let c = &mut q.col_mut(k)[j..];
            let dot: c64 = v.iter().zip(c.iter()).map(|(x, y)| x.conj() * y).sum();
            let f = tau * dot;
            c.iter_mut().zip(&v).for_each(|(y, x)| *y -= f * x);
        }
    }
    q
}

/// Random `A` (symmetrized unit normal entries) and `B = U^H diag(s) U` with
/// `s` log-spaced from 1 to `cond_b` and `U` a random unitary. Deterministic
/// per `(n, seed, cond_b)`.
pub fn generate_pencil(n: usize, seed: u64, cond_b: f64) -> Result<(DenseHermitian, DenseHermitian)> {
    if n == 0 {
        return Err(Error::InvalidArgument("pencil size must be at least 1".into()));
    }
    if !(cond_b >= 1.0) || !cond_b.is_finite() {
        return Err(Error::InvalidArgument(format!("condition number {cond_b} must be finite and >= 1")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = symmetrize(&gaussian(n, &mut rng))?;
    let u = unitary_from(&gaussian(n, &mut rng));
    let s: Vec<f64> = (0..n)
        .map(|i| if n == 1 { 1.0 } else { cond_b.powf(i as f64 / (n - 1) as f64) })
        .collect();
    let mut du = u.clone();
    for i in 0..n {
        for j in 0..n {
            du[(i, j)] *= s[i];
        }
    }
    let b = symmetrize(&u.adjoint().matmul(&du))?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_scalar() {
        let (a1, b1) = generate_pencil(5, 7, 100.0).unwrap();
        let (a2, b2) = generate_pencil(5, 7, 100.0).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
        let (a, b) = generate_pencil(1, 3, 10.0).unwrap();
        assert_eq!(a.matrix()[(0, 0)].im, 0.0);
        assert!(b.matrix()[(0, 0)].re > 0.0);
    }

    #[test]
    fn unitary_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = unitary_from(&gaussian(9, &mut rng));
        let e = u.adjoint().matmul(&u).sub_matrix(&CMat::identity(9)).frobenius_norm();
        assert!(e < 1e-14, "{e}");
    }
}
