use super::dense::{c64, CMat};
use super::hermitian::DenseHermitian;
use crate::error::{Error, Result};

/// Hermitian band matrix with half-bandwidth `b`, lower band storage.
///
/// Entry `(i, j)` with `0 <= i - j <= b` is stored at `data[(i - j) + j * (b + 1)]`.
/// Everything outside the band is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BandHermitian {
    n: usize,
    b: usize,
    data: Vec<c64>,
}

impl BandHermitian {
    pub fn zeros(n: usize, b: usize) -> Result<Self> {
        if n == 0 || b == 0 || b >= n {
            return Err(Error::InvalidBandwidth { b, n });
        }
        Ok(Self {
            n,
            b,
            data: vec![c64::default(); (b + 1) * n],
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn bandwidth(&self) -> usize {
        self.b
    }

    /// Reads any entry, mirroring the upper triangle and returning zero off band.
    pub fn get(&self, i: usize, j: usize) -> c64 {
        if i >= j {
            if i - j <= self.b {
                self.data[(i - j) + j * (self.b + 1)]
            } else {
                c64::default()
            }
        } else {
            self.get(j, i).conj()
        }
    }

    /// Sets a lower-band entry; the diagonal is forced real.
    pub fn set_lower(&mut self, i: usize, j: usize, v: c64) {
        assert!(i >= j && i - j <= self.b, "({i}, {j}) outside lower band");
        let v = if i == j { c64::new(v.re, 0.0) } else { v };
        self.data[(i - j) + j * (self.b + 1)] = v;
    }

    pub fn to_dense(&self) -> DenseHermitian {
        let n = self.n;
        let m = CMat::from_fn(n, n, |i, j| self.get(i, j));
        DenseHermitian::from_lower(m).expect("band matrix is square and non-empty")
    }
}

/// Packs the band of `a` into band storage.
///
/// Entries outside the band must be below `64 * eps * ||A||_F`; anything larger
/// is reported rather than silently dropped.
pub fn band_from_dense(a: &DenseHermitian, b: usize) -> Result<BandHermitian> {
    let n = a.n();
    let mut out = BandHermitian::zeros(n, b)?;
    let m = a.matrix();
    let tol = 64.0 * f64::EPSILON * a.frobenius_norm();
    for j in 0..n {
        for i in j..n {
            let v = m[(i, j)];
            if i - j <= b {
                out.set_lower(i, j, v);
            } else if v.norm() > tol {
                return Err(Error::OutOfBand {
                    row: i,
                    col: j,
                    magnitude: v.norm(),
                    bandwidth: b,
                });
            }
        }
    }
    Ok(out)
}
