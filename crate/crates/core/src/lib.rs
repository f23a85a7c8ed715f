//! Dense solver for the generalized Hermitian-definite eigenproblem
//! `A x = lambda B x`.
//!
//! The generalized problem is reduced to standard form with a Cholesky factor
//! of `B`, the standard matrix is brought to real tridiagonal form (directly,
//! or through an intermediate band matrix), the tridiagonal problem is solved
//! by divide and conquer, and eigenvectors are carried back through every
//! transformation. Matrix-matrix work is routed through a [`Backend`].

pub mod backend;
pub mod backtransform;
pub mod cholesky;
pub mod dc;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod pencil;
pub mod pipeline;
pub mod reflector;
pub mod transform;
pub mod tridiag;
pub mod verify;

pub use backend::{Backend, BackendOpCounts, Op, Overlap, ReferenceBackend, Side};
pub use error::{Error, Result};
pub use pipeline::{solve_generalized, solve_standard, Config, Method};
pub use matrix::{
    band_from_dense, c64, symmetrize, BandHermitian, CMat, DenseHermitian, EigenDecomposition, EigenSelection, Mat,
    MatMut, MatRef, RMat, RealSymTridiagonal, SelectionMode, SolveMeta, Step, StepRecord, TriangularFactor,
};
