use super::dense::{c64, CMat};
use crate::error::{Error, Result};

/// Square complex matrix with Hermitian symmetry.
///
/// The lower triangle is authoritative. Storage is full and kept mirrored
/// so either triangle can be read, and the diagonal is exactly real.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseHermitian {
    mat: CMat,
}

impl DenseHermitian {
    /// Builds from the lower triangle of `m`; the upper triangle is ignored.
    pub fn from_lower(mut m: CMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        mirror_lower(&mut m);
        Ok(Self { mat: m })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: CMat::identity(n),
        }
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self {
            mat: CMat::from_fn(n, n, |i, j| if i == j { c64::new(d[i], 0.0) } else { c64::default() }),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    /// True if the stored matrix equals its conjugate transpose exactly
    /// and the diagonal has no imaginary part.
    pub fn is_exactly_hermitian(&self) -> bool {
        let n = self.n();
        (0..n).all(|j| {
            self.mat[(j, j)].im == 0.0 && (j + 1..n).all(|i| self.mat[(i, j)] == self.mat[(j, i)].conj())
        })
    }
}

/// Copies the conjugated lower triangle into the upper one and drops the
/// imaginary part of the diagonal.
pub(crate) fn mirror_lower(m: &mut CMat) {
    let n = m.rows();
    for j in 0..n {
        m[(j, j)].im = 0.0;
        for i in j + 1..n {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
}

/// Returns `(M + M^H) / 2`.
pub fn symmetrize(m: &CMat) -> Result<DenseHermitian> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let mut out = CMat::zeros(n, n);
    for j in 0..n {
        out[(j, j)] = c64::new(m[(j, j)].re, 0.0);
        for i in j + 1..n {
            let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
    }
    Ok(DenseHermitian { mat: out })
}

/// Lower-triangular Cholesky factor with a strictly positive real diagonal.
/// Entries above the diagonal are held at zero and never read.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularFactor {
    l: CMat,
}

impl TriangularFactor {
    pub fn from_lower(mut l: CMat) -> Result<Self> {
        if !l.is_square() {
            return Err(Error::NotSquare {
                rows: l.rows(),
                cols: l.cols(),
            });
        }
        let n = l.rows();
        for j in 0..n {
            let d = l[(j, j)];
            if !(d.re > 0.0) || !d.re.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot_index: j });
            }
            l[(j, j)] = c64::new(d.re, 0.0);
            for i in 0..j {
                l[(i, j)] = c64::default();
            }
        }
        Ok(Self { l })
    }

    pub fn identity(n: usize) -> Self {
        Self { l: CMat::identity(n) }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.l.rows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.l
    }

    /// `L L^H`, for reconstruction checks.
    pub fn reconstruct(&self) -> CMat {
        self.l.matmul(&self.l.adjoint())
    }
}
