use serde::{Deserialize, Serialize};

use super::eigen::{eigh, Spectrum};
use super::matrix::{Matrix, SymMatrix};
use crate::error::{invalid, Error, Result};

/// Tolerance on `VᵀV = I` accepted by [`Isometry::new`].
pub const ORTHONORMAL_TOL: f64 = 1e-9;

/// An `n × d` matrix with orthonormal columns: an isometric embedding of
/// `ℝ^d` into `ℝ^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry(Matrix);

impl Isometry {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.cols() == 0 || m.cols() > m.rows() {
            return Err(Error::DimensionMismatch(format!(
                "isometry must satisfy 1 <= d <= n, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let err = m.column_orthonormality_error();
        if err > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal(err));
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    /// Embedding onto the coordinates listed in `indices`.
    pub fn coordinate(n: usize, indices: &[usize]) -> Result<Self> {
        let mut m = Matrix::zeros(n, indices.len());
        for (col, &i) in indices.iter().enumerate() {
            if i >= n {
                return Err(invalid(
                    "indices",
                    format!("coordinate {i} out of range for n = {n}"),
                ));
            }
            m[(i, col)] = 1.0;
        }
        Self::new(m)
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.rows()
    }

    pub fn subspace_dim(&self) -> usize {
        self.0.cols()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }
}

/// The compression `VᵀAV`, explicitly symmetrized.
pub fn compress(a: &SymMatrix, v: &Isometry) -> Result<SymMatrix> {
    if v.ambient_dim() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "isometry ambient dimension {} does not match matrix dimension {}",
            v.ambient_dim(),
            a.dim()
        )));
    }
    let vm = v.as_matrix();
    let av = a.as_matrix().matmul(vm)?;
    let vtav = vm.transpose().matmul(&av)?;
    SymMatrix::symmetrize(&vtav)
}

/// Isometries achieving equality in the Courant-Fischer characterisation
/// of `λ_k(A)`.
#[derive(Clone, Debug)]
pub struct ExtremalIsometries {
    /// Spans a dominant `k`-dimensional invariant subspace:
    /// `λ_min(V₋ᵀAV₋) = λ_k(A)`.
    pub minus: Isometry,
    /// Spans a bottom `(n − k + 1)`-dimensional invariant subspace:
    /// `λ_max(V₊ᵀAV₊) = λ_k(A)`.
    pub plus: Isometry,
}

/// Builds `V₋` from the top `k` eigenvectors and `V₊` from the bottom
/// `n − k + 1`. Repeated eigenvalues are resolved by the column order that
/// [`eigh`] produces.
pub fn extremal_isometries(a: &SymMatrix, k: usize) -> Result<ExtremalIsometries> {
    let spectrum = eigh(a)?;
    extremal_from_spectrum(&spectrum, k)
}

pub fn extremal_from_spectrum(spectrum: &Spectrum, k: usize) -> Result<ExtremalIsometries> {
    let n = spectrum.dim();
    if k == 0 || k > n {
        return Err(invalid("k", format!("must satisfy 1 <= k <= {n}, got {k}")));
    }
    Ok(ExtremalIsometries {
        minus: Isometry(spectrum.vector_block(0, k)),
        plus: Isometry(spectrum.vector_block(k - 1, n - k + 1)),
    })
}
