use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{Matrix, SymMatrix};

use super::rng::Stream;

/// Bernoulli column sampling `Û = UD` with `d_j ~ Bern(p)` i.i.d.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsifierConfig {
    pub p: f64,
    pub seed: u64,
}

impl SparsifierConfig {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        let c = Self { p, seed };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(invalid("p", format!("must lie in (0, 1), got {}", self.p)));
        }
        Ok(())
    }
}

/// Keep-mask of length `r` drawn from stream `stream` of the config seed.
pub fn column_mask(config: &SparsifierConfig, stream: u64, r: usize) -> Vec<bool> {
    let mut rng = Stream::new(config.seed, stream);
    (0..r).map(|_| rng.bernoulli(config.p)).collect()
}

/// Zeroes every column whose mask entry is false.
pub fn apply_column_mask(u: &Matrix, mask: &[bool]) -> Result<Matrix> {
    check_mask(u, mask)?;
    Ok(Matrix::from_fn(u.rows(), u.cols(), |i, j| {
        if mask[j] {
            u[(i, j)]
        } else {
            0.0
        }
    }))
}

/// `ÛÛᵀ = Σ_{j kept} u_j u_jᵀ` without forming `Û`.
pub fn masked_gram(u: &Matrix, mask: &[bool]) -> Result<SymMatrix> {
    check_mask(u, mask)?;
    let n = u.rows();
    let kept: Vec<usize> = (0..u.cols()).filter(|&j| mask[j]).collect();
    let mut g = Matrix::zeros(n, n);
    for a in 0..n {
        let ra = u.row(a);
        for b in a..n {
            let rb = u.row(b);
            let s: f64 = kept.iter().map(|&j| ra[j] * rb[j]).sum();
            g[(a, b)] = s;
            g[(b, a)] = s;
        }
    }
    SymMatrix::new(g)
}

/// One draw of `Û = UD` from the config's default stream.
pub fn sparsify_columns(u: &Matrix, config: &SparsifierConfig) -> Result<Matrix> {
    config.validate()?;
    apply_column_mask(u, &column_mask(config, 0, u.cols()))
}

fn check_mask(u: &Matrix, mask: &[bool]) -> Result<()> {
    if mask.len() != u.cols() {
        return Err(Error::DimensionMismatch(format!(
            "mask has length {} but matrix has {} columns",
            mask.len(),
            u.cols()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::singular_values;

    fn block() -> Matrix {
        Matrix::from_fn(2, 4, |i, j| if j % 2 == i { 0.5_f64.sqrt() } else { 0.0 })
    }

    #[test]
    fn all_ones_mask_is_identity_map() {
        let u = block();
        assert_eq!(apply_column_mask(&u, &[true; 4]).unwrap(), u);
        for s in singular_values(&u).unwrap() {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn all_zeros_mask_kills_everything() {
        let u = block();
        let z = apply_column_mask(&u, &[false; 4]).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        assert!(singular_values(&z).unwrap().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn masked_gram_matches_explicit_product() {
        let u = Matrix::from_fn(3, 5, |i, j| (i * 5 + j) as f64 * 0.1 - 0.7);
        let mask = [true, false, true, true, false];
        let explicit = apply_column_mask(&u, &mask).unwrap().gram_rows();
        let fast = masked_gram(&u, &mask).unwrap();
        assert!(explicit.sub(&fast).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn masks_are_reproducible_per_stream() {
        let c = SparsifierConfig::new(0.3, 9).unwrap();
        assert_eq!(column_mask(&c, 5, 100), column_mask(&c, 5, 100));
        assert_ne!(column_mask(&c, 5, 100), column_mask(&c, 6, 100));
    }

    #[test]
    fn rejects_degenerate_probability() {
        assert!(SparsifierConfig::new(0.0, 1).is_err());
        assert!(SparsifierConfig::new(1.0, 1).is_err());
        assert!(apply_column_mask(&block(), &[true; 3]).is_err());
    }
}
