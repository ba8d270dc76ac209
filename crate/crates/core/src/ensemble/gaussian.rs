use crate::error::{invalid, Error, Result};
use crate::linalg::{eigh, Matrix, SymMatrix};

use super::rng::Stream;

/// Tolerance on `‖SSᵀ − C‖_max` relative to `1 + ‖C‖_max`.
pub const FACTOR_TOL: f64 = 1e-9;

const PSD_TOL: f64 = 1e-10;

/// Sampler for `N(0, C)` through the symmetric square root `S = V√ΛVᵀ`.
///
/// The square root handles rank-deficient `C` without special cases.
#[derive(Clone, Debug)]
pub struct GaussianSampler {
    covariance: SymMatrix,
    factor: Matrix,
    seed: u64,
}

impl GaussianSampler {
    pub fn new(covariance: SymMatrix, seed: u64) -> Result<Self> {
        let spectrum = eigh(&covariance)?;
        let scale = 1.0 + covariance.max_abs();
        if spectrum.min() < -PSD_TOL * scale {
            return Err(Error::NotPositiveSemidefinite(spectrum.min()));
        }
        let n = covariance.dim();
        let roots: Vec<f64> = spectrum.values.iter().map(|l| l.max(0.0).sqrt()).collect();
        let v = &spectrum.vectors;
        let factor = Matrix::from_fn(n, n, |i, j| {
            (0..n).map(|l| v[(i, l)] * roots[l] * v[(j, l)]).sum()
        });
        let residual = factor
            .matmul(&factor.transpose())?
            .sub(covariance.as_matrix())?
            .max_abs();
        if residual > FACTOR_TOL * scale {
            return Err(invalid(
                "covariance",
                format!("square-root factor residual {residual:e} exceeds tolerance"),
            ));
        }
        Ok(Self {
            covariance,
            factor,
            seed,
        })
    }

    pub fn dim(&self) -> usize {
        self.covariance.dim()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn covariance(&self) -> &SymMatrix {
        &self.covariance
    }

    pub fn factor(&self) -> &Matrix {
        &self.factor
    }

    /// Writes one `N(0, C)` vector into `out`, using `z` as scratch.
    pub fn sample_into(&self, stream: &mut Stream, z: &mut [f64], out: &mut [f64]) {
        for zi in z.iter_mut() {
            *zi = stream.standard_normal();
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o = self
                .factor
                .row(i)
                .iter()
                .zip(z.iter())
                .map(|(s, x)| s * x)
                .sum();
        }
    }

    /// `count` vectors from stream `stream` of this sampler's seed.
    pub fn draw_stream(&self, stream: u64, count: usize) -> Vec<Vec<f64>> {
        let mut rng = Stream::new(self.seed, stream);
        let n = self.dim();
        let mut z = vec![0.0; n];
        (0..count)
            .map(|_| {
                let mut out = vec![0.0; n];
                self.sample_into(&mut rng, &mut z, &mut out);
                out
            })
            .collect()
    }
}

/// `count` i.i.d. draws from the sampler's default stream.
pub fn draw_gaussian(sampler: &GaussianSampler, count: usize) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(invalid("count", "must be at least 1"));
    }
    Ok(sampler.draw_stream(0, count))
}

/// Sample covariance `Ĉ = (1/n) Σ_j η_j η_jᵀ`.
pub fn sample_covariance(samples: &[Vec<f64>]) -> Result<SymMatrix> {
    let first = samples
        .first()
        .ok_or_else(|| invalid("samples", "must be nonempty"))?;
    let p = first.len();
    if p == 0 {
        return Err(invalid("samples", "vectors must have positive length"));
    }
    if samples.iter().any(|s| s.len() != p) {
        return Err(Error::DimensionMismatch("samples differ in length".into()));
    }
    let mut acc = SymMatrix::zeros(p);
    for s in samples {
        acc.rank_one_update(1.0, s);
    }
    Ok(acc.scaled(1.0 / samples.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_covariance_gives_zero_vectors() {
        let s = GaussianSampler::new(SymMatrix::zeros(3), 1).unwrap();
        for v in draw_gaussian(&s, 5).unwrap() {
            assert_eq!(v, vec![0.0; 3]);
        }
    }

    #[test]
    fn rejects_indefinite_covariance() {
        let c = SymMatrix::diag(&[1.0, -0.5]);
        assert!(matches!(
            GaussianSampler::new(c, 0),
            Err(Error::NotPositiveSemidefinite(_))
        ));
    }

    #[test]
    fn factor_squares_to_covariance() {
        let c = SymMatrix::from_rows(&[
            vec![2.0, 0.5, 0.0],
            vec![0.5, 1.0, 0.3],
            vec![0.0, 0.3, 0.5],
        ])
        .unwrap();
        let s = GaussianSampler::new(c.clone(), 0).unwrap();
        let f = s.factor();
        let r = f
            .matmul(&f.transpose())
            .unwrap()
            .sub(c.as_matrix())
            .unwrap();
        assert!(r.max_abs() < 1e-12);
    }

    #[test]
    fn sample_covariance_small_cases() {
        let single = sample_covariance(&[vec![1.0, 2.0]]).unwrap();
        assert_eq!(single, SymMatrix::outer(&[1.0, 2.0]));
        let basis = sample_covariance(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(basis, SymMatrix::diag(&[0.5, 0.5]));
        assert!(sample_covariance(&[]).is_err());
        assert!(sample_covariance(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn draws_are_deterministic() {
        let s = GaussianSampler::new(SymMatrix::identity(2), 42).unwrap();
        assert_eq!(
            draw_gaussian(&s, 10).unwrap(),
            draw_gaussian(&s, 10).unwrap()
        );
        assert_ne!(s.draw_stream(0, 3), s.draw_stream(1, 3));
    }
}
