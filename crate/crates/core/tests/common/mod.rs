#![allow(dead_code)]

use hermeig::backtransform::backtransform_standard;
use hermeig::tridiag::TridiagResult;
use hermeig::{c64, Backend, CMat, DenseHermitian, RMat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EPS: f64 = f64::EPSILON;

pub fn random_hermitian(n: usize, seed: u64) -> DenseHermitian {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = CMat::from_fn(n, n, |_, _| c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    hermeig::symmetrize(&m).unwrap()
}

pub fn random_band(n: usize, b: usize, seed: u64) -> DenseHermitian {
    let a = random_hermitian(n, seed);
    let m = CMat::from_fn(n, n, |i, j| if i.abs_diff(j) <= b { a.matrix()[(i, j)] } else { c64::default() });
    DenseHermitian::from_lower(m).unwrap()
}

/// Dense unitary of a reduction, built by transforming the identity.
pub fn accumulate_q(res: &TridiagResult, backend: &dyn Backend) -> CMat {
    let n = res.t.n();
    backtransform_standard(res, &RMat::identity(n), backend).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
