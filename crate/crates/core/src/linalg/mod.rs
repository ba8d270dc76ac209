//! Dense real symmetric linear algebra.

mod coherence;
mod complex;
mod eigen;
pub mod io;
mod isometry;
mod matrix;

pub use coherence::{
    binomial, coherence_tau, coherence_tau_weights, OrthoRowMatrix, TauMethod, MAX_EXACT_SUBSETS,
};
pub use complex::{complex_embed, dft_rows, DftRows};
pub use eigen::{eigh, eigvalsh, singular_values, Spectrum, JACOBI_MAX_SWEEPS, JACOBI_TOL};
pub use isometry::{
    compress, extremal_from_spectrum, extremal_isometries, ExtremalIsometries, Isometry,
    ORTHONORMAL_TOL,
};
pub use matrix::{Matrix, SymMatrix};
