//! Relative eigenvalue errors of Gaussian sample covariance matrices against
//! the over/under-estimation bounds.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{
    check_output_dir, fmt_f64, write_records, write_sidecar, write_summary, OutputPaths,
};
use super::{ExperimentRecord, SummaryRow, SummaryTable};
use crate::bounds::{cov_rel_over, cov_rel_under, cov_sample_size, CovSpectrumParams, DEFAULT_C};
use crate::ensemble::random::random_orthogonal;
use crate::ensemble::{GaussianSampler, Stream};
use crate::error::{invalid, Result};
use crate::linalg::{eigvalsh, Matrix, SymMatrix};

const MATRIX_STREAM: u64 = u64::MAX;

fn default_rotate() -> bool {
    true
}

fn default_c() -> f64 {
    DEFAULT_C
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovConfig {
    pub p: usize,
    /// `λ_1 ≥ … ≥ λ_p > 0`.
    pub spectrum: Vec<f64>,
    pub ell: usize,
    pub eps: f64,
    pub fail_prob: f64,
    pub trials: usize,
    /// Sample count to use instead of the planned one.
    pub n_override: Option<u64>,
    pub master_seed: u64,
    /// Conjugate `diag(λ)` by a seeded random rotation.
    #[serde(default = "default_rotate")]
    pub rotate: bool,
    /// Absolute constant used for both planning and the reported bounds.
    #[serde(default = "default_c")]
    pub c: f64,
}

impl CovConfig {
    pub fn validate(&self) -> Result<()> {
        if self.spectrum.len() != self.p {
            return Err(invalid(
                "spectrum",
                format!("has {} entries but p = {}", self.spectrum.len(), self.p),
            ));
        }
        CovSpectrumParams::new(self.spectrum.clone(), 1)?;
        if self.ell == 0 || self.ell > self.p {
            return Err(invalid(
                "ell",
                format!("must satisfy 1 <= ell <= {}, got {}", self.p, self.ell),
            ));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(invalid(
                "eps",
                format!("must lie in (0, 1], got {}", self.eps),
            ));
        }
        if !(self.fail_prob > 0.0 && self.fail_prob < 1.0) {
            return Err(invalid(
                "fail_prob",
                format!("must lie in (0, 1), got {}", self.fail_prob),
            ));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(invalid(
                "c",
                format!("must be finite and > 0, got {}", self.c),
            ));
        }
        if self.n_override == Some(0) {
            return Err(invalid("n_override", "must be at least 1"));
        }
        Ok(())
    }

    /// The covariance matrix the samples are drawn from.
    pub fn covariance(&self) -> SymMatrix {
        if !self.rotate {
            return SymMatrix::diag(&self.spectrum);
        }
        let p = self.p;
        let q = random_orthogonal(&mut Stream::new(self.master_seed, MATRIX_STREAM), p);
        let c = Matrix::from_fn(p, p, |i, j| {
            (0..p)
                .map(|l| q[(i, l)] * self.spectrum[l] * q[(j, l)])
                .sum()
        });
        SymMatrix::symmetrize(&c).expect("square")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovRow {
    pub k: usize,
    pub lambda_k: f64,
    pub n_samples: u64,
    pub over_freq: f64,
    /// Over-estimation bound clamped to `[0, 1]`.
    pub over_bound: f64,
    pub over_pass: bool,
    pub under_freq: f64,
    pub under_bound: f64,
    pub under_pass: bool,
}

impl SummaryRow for CovRow {
    fn columns() -> &'static [&'static str] {
        &[
            "k",
            "lambda_k",
            "n_samples",
            "over_freq",
            "over_bound",
            "over_pass",
            "under_freq",
            "under_bound",
            "under_pass",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.k.to_string(),
            fmt_f64(self.lambda_k),
            self.n_samples.to_string(),
            fmt_f64(self.over_freq),
            fmt_f64(self.over_bound),
            self.over_pass.to_string(),
            fmt_f64(self.under_freq),
            fmt_f64(self.under_bound),
            self.under_pass.to_string(),
        ]
    }

    fn pass(&self) -> bool {
        self.over_pass && self.under_pass
    }
}

#[derive(Clone, Debug)]
pub struct CovOutcome {
    pub n_samples: u64,
    pub summary: SummaryTable<CovRow>,
    /// One record per trial holding `(λ̂_k − λ_k)/λ_k` for `k = 1..ℓ`.
    pub records: Vec<ExperimentRecord>,
    pub wall_seconds: f64,
}

#[derive(Serialize)]
struct CovDigest {
    n_samples: u64,
    all_pass: bool,
}

impl CovOutcome {
    pub fn write(&self, dir: &Path, config: &CovConfig) -> Result<OutputPaths> {
        check_output_dir(dir)?;
        let paths = OutputPaths::in_dir(dir, "covariance");
        write_records(&paths.records, &self.records)?;
        write_summary(&paths.summary, &self.summary)?;
        let digest = CovDigest {
            n_samples: self.n_samples,
            all_pass: self.summary.all_pass(),
        };
        let trial_total = self.records.iter().map(|r| r.wall_time).sum();
        write_sidecar(
            &paths.sidecar,
            "covariance",
            config,
            &digest,
            self.wall_seconds,
            trial_total,
        )?;
        Ok(paths)
    }
}

/// Eigenvalues of the sample covariance of `n` draws from stream `stream`.
fn sample_spectrum(sampler: &GaussianSampler, seed: u64, stream: u64, n: u64) -> Result<Vec<f64>> {
    let p = sampler.dim();
    let mut rng = Stream::new(seed, stream);
    let (mut z, mut x) = (vec![0.0; p], vec![0.0; p]);
    let mut acc = vec![0.0; p * p];
    for _ in 0..n {
        sampler.sample_into(&mut rng, &mut z, &mut x);
        for a in 0..p {
            let xa = x[a];
            for b in a..p {
                acc[a * p + b] += xa * x[b];
            }
        }
    }
    let scale = 1.0 / n as f64;
    let m = Matrix::from_fn(p, p, |a, b| {
        let (i, j) = if a <= b { (a, b) } else { (b, a) };
        acc[i * p + j] * scale
    });
    eigvalsh(&SymMatrix::new(m)?)
}

/// Slack of three binomial standard errors around a clamped bound `q`.
fn binomial_slack(q: f64, trials: usize) -> f64 {
    3.0 * (q * (1.0 - q) / trials as f64).sqrt()
}

pub fn run_covariance(config: &CovConfig) -> Result<CovOutcome> {
    config.validate()?;
    let start = Instant::now();
    let plan_params = CovSpectrumParams {
        c: config.c,
        ..CovSpectrumParams::new(config.spectrum.clone(), 1)?
    };
    let n = match config.n_override {
        Some(n) => n,
        None => cov_sample_size(&plan_params, config.ell, config.eps, config.fail_prob)?,
    };
    let params = CovSpectrumParams {
        n_samples: n,
        ..plan_params
    };
    let sampler = GaussianSampler::new(config.covariance(), config.master_seed)?;
    let seed = config.master_seed;
    let ell = config.ell;
    let lambda = &config.spectrum;

    let records: Vec<ExperimentRecord> = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| {
            let t0 = Instant::now();
            let hat = sample_spectrum(&sampler, seed, i, n)?;
            let rel = (0..ell).map(|k| (hat[k] - lambda[k]) / lambda[k]).collect();
            Ok(ExperimentRecord {
                trial_index: i,
                seed,
                observables: rel,
                wall_time: t0.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<_>>()?;

    let trials = config.trials as f64;
    let mut rows = Vec::with_capacity(ell);
    for k in 1..=ell {
        let rel = records.iter().map(|r| r.observables[k - 1]);
        let over_freq = rel.clone().filter(|&d| d >= config.eps).count() as f64 / trials;
        let under_freq = rel.filter(|&d| d <= -config.eps).count() as f64 / trials;
        let over_bound = cov_rel_over(&params, k, config.eps)?.clamp(0.0, 1.0);
        let under_bound = cov_rel_under(&params, k, config.eps)?.clamp(0.0, 1.0);
        rows.push(CovRow {
            k,
            lambda_k: lambda[k - 1],
            n_samples: n,
            over_freq,
            over_bound,
            over_pass: over_freq <= over_bound + binomial_slack(over_bound, config.trials),
            under_freq,
            under_bound,
            under_pass: under_freq <= under_bound + binomial_slack(under_bound, config.trials),
        });
    }
    Ok(CovOutcome {
        n_samples: n,
        summary: SummaryTable { rows },
        records,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(p: usize, spectrum: Vec<f64>, eps: f64, n: Option<u64>, trials: usize) -> CovConfig {
        CovConfig {
            p,
            spectrum,
            ell: 1,
            eps,
            fail_prob: 0.1,
            trials,
            n_override: n,
            master_seed: 3,
            rotate: true,
            c: DEFAULT_C,
        }
    }

    #[test]
    fn identity_with_unit_eps_never_underestimates() {
        let out = run_covariance(&config(3, vec![1.0; 3], 1.0, Some(5), 50)).unwrap();
        assert_eq!(out.summary.rows[0].under_freq, 0.0);
    }

    #[test]
    fn single_sample_bounds_are_vacuous() {
        let out =
            run_covariance(&config(4, vec![1.0, 0.5, 0.25, 0.125], 0.5, Some(1), 200)).unwrap();
        let row = &out.summary.rows[0];
        assert_eq!(row.over_bound, 1.0);
        assert!(row.under_bound > 0.99);
        assert!(out.summary.all_pass());
    }

    #[test]
    fn rotation_preserves_spectrum() {
        let c = config(4, vec![4.0, 2.0, 1.0, 0.5], 0.5, None, 1).covariance();
        let v = eigvalsh(&c).unwrap();
        for (a, b) in v.iter().zip([4.0, 2.0, 1.0, 0.5]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(config(2, vec![1.0], 0.5, None, 1).validate().is_err());
        assert!(config(2, vec![1.0, 2.0], 0.5, None, 1).validate().is_err());
        assert!(config(2, vec![1.0, 0.5], 1.5, None, 1).validate().is_err());
        assert!(config(2, vec![1.0, 0.5], 0.5, Some(0), 1)
            .validate()
            .is_err());
    }
}
