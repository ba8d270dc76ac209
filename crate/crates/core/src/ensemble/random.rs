//! Seeded random test matrices.

use crate::linalg::{Matrix, SymMatrix};

use super::rng::Stream;

/// `rows × cols` matrix of i.i.d. standard normals.
pub fn gaussian_matrix(rng: &mut Stream, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.standard_normal())
}

/// Symmetric matrix `(Z + Zᵀ)/2` with Gaussian `Z`.
pub fn random_symmetric(rng: &mut Stream, n: usize) -> SymMatrix {
    let z = gaussian_matrix(rng, n, n);
    SymMatrix::symmetrize(&z).expect("square")
}

/// Orthonormalises the rows of `m` in place with two passes of modified
/// Gram-Schmidt. Rows must be linearly independent.
fn orthonormalize_rows(m: &mut Matrix) {
    let (rows, cols) = m.shape();
    for i in 0..rows {
        for _ in 0..2 {
            for p in 0..i {
                let dot: f64 = (0..cols).map(|j| m[(i, j)] * m[(p, j)]).sum();
                for j in 0..cols {
                    let v = m[(p, j)];
                    m[(i, j)] -= dot * v;
                }
            }
        }
        let norm = (0..cols).map(|j| m[(i, j)] * m[(i, j)]).sum::<f64>().sqrt();
        for j in 0..cols {
            m[(i, j)] /= norm;
        }
    }
}

/// `n × r` matrix with orthonormal rows, Haar-distributed up to the
/// Gram-Schmidt map. Requires `n ≤ r`.
pub fn random_ortho_rows(rng: &mut Stream, n: usize, r: usize) -> Matrix {
    assert!(n <= r, "need n <= r");
    let mut m = gaussian_matrix(rng, n, r);
    orthonormalize_rows(&mut m);
    m
}

/// Random `n × n` orthogonal matrix.
pub fn random_orthogonal(rng: &mut Stream, n: usize) -> Matrix {
    random_ortho_rows(rng, n, n)
}

/// Random `n × d` matrix with orthonormal columns.
pub fn random_isometry(rng: &mut Stream, n: usize, d: usize) -> Matrix {
    random_ortho_rows(rng, d, n).transpose()
}

/// `QΛQᵀ` for a random orthogonal `Q`.
pub fn with_spectrum(rng: &mut Stream, values: &[f64]) -> SymMatrix {
    let n = values.len();
    let q = random_orthogonal(rng, n);
    let m = Matrix::from_fn(n, n, |i, j| {
        (0..n).map(|l| q[(i, l)] * values[l] * q[(j, l)]).sum()
    });
    SymMatrix::symmetrize(&m).expect("square")
}

/// Positive semidefinite `BBᵀ/n` with a Gaussian `n × n` factor `B`.
pub fn random_psd(rng: &mut Stream, n: usize) -> SymMatrix {
    gaussian_matrix(rng, n, n)
        .gram_rows()
        .scaled(1.0 / n as f64)
}
