//! Matrix and decomposition types shared by every stage of the solver.

mod band;
mod decomp;
mod dense;
mod hermitian;
pub mod io;
mod tridiagonal;

pub use band::{band_from_dense, BandHermitian};
pub use decomp::{EigenDecomposition, EigenSelection, SelectionMode, SolveMeta, Step, StepRecord};
pub use dense::{c64, CMat, Mat, MatMut, MatRef, RMat};
pub use hermitian::{symmetrize, DenseHermitian, TriangularFactor};
pub use tridiagonal::RealSymTridiagonal;
