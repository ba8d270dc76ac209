//! Complex matrices handled through their real block embedding.

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Real embedding `[[Re, −Im], [Im, Re]]` of the complex matrix `Re + i·Im`.
///
/// Its singular values are those of the complex matrix, each repeated twice.
pub fn complex_embed(re: &Matrix, im: &Matrix) -> Result<Matrix> {
    if re.shape() != im.shape() {
        return Err(Error::DimensionMismatch(format!(
            "real part is {:?} but imaginary part is {:?}",
            re.shape(),
            im.shape()
        )));
    }
    let (n, r) = re.shape();
    Ok(Matrix::from_fn(2 * n, 2 * r, |i, j| match (i < n, j < r) {
        (true, true) => re[(i, j)],
        (true, false) => -im[(i, j - r)],
        (false, true) => im[(i - n, j)],
        (false, false) => re[(i - n, j - r)],
    }))
}

/// `n` evenly strided rows of the `r × r` unitary DFT matrix.
#[derive(Clone, Debug)]
pub struct DftRows {
    pub re: Matrix,
    pub im: Matrix,
    /// Exact squared magnitudes `|u_ij|² = 1/r`.
    pub weights: Matrix,
}

/// Rows `0, s, 2s, …` with stride `s = r / n` of the unitary DFT
/// `F_{mj} = exp(−2πi·mj/r)/√r`. Requires `n` to divide `r`.
pub fn dft_rows(n: usize, r: usize) -> Result<DftRows> {
    if n == 0 || n > r || !r.is_multiple_of(n) {
        return Err(Error::DimensionMismatch(format!(
            "dft rows need 1 <= n <= r with n dividing r, got n = {n}, r = {r}"
        )));
    }
    let stride = r / n;
    let scale = 1.0 / (r as f64).sqrt();
    let phase = |i: usize, j: usize| {
        // reduce the exponent mod r before converting to an angle
        let m = ((i * stride) as u128 * j as u128 % r as u128) as f64;
        -2.0 * std::f64::consts::PI * m / r as f64
    };
    Ok(DftRows {
        re: Matrix::from_fn(n, r, |i, j| scale * phase(i, j).cos()),
        im: Matrix::from_fn(n, r, |i, j| scale * phase(i, j).sin()),
        weights: Matrix::from_fn(n, r, |_, _| 1.0 / r as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen::singular_values;

    #[test]
    fn real_identity_embeds_to_identity() {
        let e = complex_embed(&Matrix::identity(2), &Matrix::zeros(2, 2)).unwrap();
        assert_eq!(e, Matrix::identity(4));
        let sv = singular_values(&e).unwrap();
        assert_eq!(sv, vec![1.0; 4]);
    }

    #[test]
    fn imaginary_identity_has_unit_singular_values() {
        let e = complex_embed(&Matrix::zeros(2, 2), &Matrix::identity(2)).unwrap();
        for s in singular_values(&e).unwrap() {
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn shape_mismatch() {
        assert!(complex_embed(&Matrix::zeros(2, 2), &Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn dft_rows_are_orthonormal() {
        let d = dft_rows(4, 16).unwrap();
        let e = complex_embed(&d.re, &d.im).unwrap();
        assert!(e.row_orthonormality_error() < 1e-14);
        assert!(dft_rows(3, 16).is_err());
    }
}
