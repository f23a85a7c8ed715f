//! Residual and orthogonality measures for computed eigenpairs.

use crate::matrix::{c64, CMat, DenseHermitian};

fn column_norm(c: &[c64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `||A x_i - lambda_i x_i||_2` for each column.
pub fn standard_residuals(a: &DenseHermitian, values: &[f64], x: &CMat) -> Vec<f64> {
    let ax = a.matrix().matmul(x);
    (0..x.cols())
        .map(|j| {
            let r: Vec<c64> = ax.col(j).iter().zip(x.col(j)).map(|(p, q)| p - q * values[j]).collect();
            column_norm(&r)
        })
        .collect()
}

/// `||A x_i - lambda_i B x_i||_2 / (||A||_F + |lambda_i| ||B||_F)` for each column.
pub fn generalized_residuals(a: &DenseHermitian, b: &DenseHermitian, values: &[f64], x: &CMat) -> Vec<f64> {
    let ax = a.matrix().matmul(x);
    let bx = b.matrix().matmul(x);
    let (na, nb) = (a.frobenius_norm(), b.frobenius_norm());
    (0..x.cols())
        .map(|j| {
            let r: Vec<c64> = ax.col(j).iter().zip(bx.col(j)).map(|(p, q)| p - q * values[j]).collect();
            column_norm(&r) / (na + values[j].abs() * nb)
        })
        .collect()
}

/// `||X^H X - I||_F`.
pub fn orthogonality(x: &CMat) -> f64 {
    x.adjoint().matmul(x).sub_matrix(&CMat::identity(x.cols())).frobenius_norm()
}

/// `||X^H B X - I||_F`.
pub fn b_orthogonality(b: &DenseHermitian, x: &CMat) -> f64 {
    x.adjoint().matmul(&b.matrix().matmul(x)).sub_matrix(&CMat::identity(x.cols())).frobenius_norm()
}
