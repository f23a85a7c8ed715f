use crate::error::{Error, Result};

/// Real symmetric tridiagonal matrix: diagonal `d` and off-diagonal `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSymTridiagonal {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl RealSymTridiagonal {
    pub fn new(d: Vec<f64>, e: Vec<f64>) -> Result<Self> {
        if d.is_empty() || e.len() + 1 != d.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal needs n >= 1 diagonal and n - 1 off-diagonal entries, got {} and {}",
                d.len(),
                e.len()
            )));
        }
        if d.iter().chain(&e).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite tridiagonal entry".into()));
        }
        Ok(Self { d, e })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// Gershgorin bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| {
                let l = if i > 0 { self.e[i - 1].abs() } else { 0.0 };
                let r = if i + 1 < n { self.e[i].abs() } else { 0.0 };
                self.d[i].abs() + l + r
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> crate::RMat {
        let n = self.n();
        crate::RMat::from_fn(n, n, |i, j| {
            if i == j {
                self.d[i]
            } else if i == j + 1 {
                self.e[j]
            } else if j == i + 1 {
                self.e[i]
            } else {
                0.0
            }
        })
    }

    /// `T z` for a dense vector.
    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let mut s = self.d[i] * z[i];
                if i > 0 {
                    s += self.e[i - 1] * z[i - 1];
                }
                if i + 1 < n {
                    s += self.e[i] * z[i + 1];
                }
                s
            })
            .collect()
    }
}
