//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use serde::{Deserialize, Serialize};

use super::matrix::{Matrix, SymMatrix};
use crate::error::{Error, Result};

/// Relative off-diagonal Frobenius threshold at which the sweeps stop.
pub const JACOBI_TOL: f64 = 1e-12;
/// Maximum number of full cyclic sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigenvalues in weakly decreasing order with paired orthonormal
/// eigenvectors stored as the columns of `vectors`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `λ_k` with 1-based `k`.
    pub fn lambda(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dim();
        let v = &self.vectors;
        Matrix::from_fn(n, n, |i, j| {
            (0..n).map(|l| v[(i, l)] * self.values[l] * v[(j, l)]).sum()
        })
    }

    /// Eigenvector columns `first..first + count` as an `n × count` block.
    pub fn vector_block(&self, first: usize, count: usize) -> Matrix {
        Matrix::from_fn(self.dim(), count, |i, j| self.vectors[(i, first + j)])
    }
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Row-cyclic Jacobi rotations are applied until the off-diagonal Frobenius
/// norm drops below `1e-12 · ‖A‖_F`. Deterministic for a fixed input.
pub fn eigh(a: &SymMatrix) -> Result<Spectrum> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let threshold = JACOBI_TOL * m.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NonConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their diagonal order
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Spectrum { values, vectors })
}

/// Eigenvalues only, weakly decreasing.
pub fn eigvalsh(a: &SymMatrix) -> Result<Vec<f64>> {
    eigh(a).map(|s| s.values)
}

fn off_diagonal_norm(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += 2.0 * m[(i, j)] * m[(i, j)];
        }
    }
    s.sqrt()
}

fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    if apq == 0.0 {
        return;
    }
    let app = m[(p, p)];
    let aqq = m[(q, q)];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = m.rows();

    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = m[(r, p)];
        let arq = m[(r, q)];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        m[(r, p)] = new_rp;
        m[(p, r)] = new_rp;
        m[(r, q)] = new_rq;
        m[(q, r)] = new_rq;
    }
    m[(p, p)] = app - t * apq;
    m[(q, q)] = aqq + t * apq;
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;

    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = c * vrp - s * vrq;
        v[(r, q)] = s * vrp + c * vrq;
    }
}

/// Singular values of a rectangular matrix, weakly decreasing, of length
/// `min(rows, cols)`: `σ_k(M) = sqrt(λ_k(M Mᵀ))` (or of `MᵀM` when the
/// matrix is tall).
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(Vec::new());
    }
    let gram = if m.rows() <= m.cols() {
        m.gram_rows()
    } else {
        m.transpose().gram_rows()
    };
    Ok(eigvalsh(&gram)?
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spectrum() {
        let s = eigh(&SymMatrix::identity(3)).unwrap();
        assert_eq!(s.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_is_sorted() {
        let s = eigh(&SymMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(s.values, vec![3.0, 2.0, 1.0]);
        // vectors permuted alongside
        assert_eq!(s.vectors[(0, 0)].abs(), 1.0);
        assert_eq!(s.vectors[(2, 1)].abs(), 1.0);
        assert_eq!(s.vectors[(1, 2)].abs(), 1.0);
    }

    #[test]
    fn zero_matrix_converges_immediately() {
        let s = eigh(&SymMatrix::zeros(4)).unwrap();
        assert_eq!(s.values, vec![0.0; 4]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let s = eigh(&a).unwrap();
        assert!((s.values[0] - 3.0).abs() < 1e-14);
        assert!((s.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn singular_values_of_identity_and_tall() {
        assert_eq!(
            singular_values(&Matrix::identity(2)).unwrap(),
            vec![1.0, 1.0]
        );
        let tall = Matrix::from_rows(&[vec![3.0], vec![4.0]]).unwrap();
        let sv = singular_values(&tall).unwrap();
        assert_eq!(sv.len(), 1);
        assert!((sv[0] - 5.0).abs() < 1e-14);
    }
}
