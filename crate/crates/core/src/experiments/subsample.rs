//! Singular values of a Bernoulli column sample of a matrix with orthonormal
//! rows, compared with the median intervals from the Chernoff-type bounds.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{
    check_output_dir, fmt_f64, write_records, write_sidecar, write_summary, OutputPaths,
};
use super::{lower_median, ExperimentRecord, SummaryRow, SummaryTable};
use crate::bounds::subsample_median_interval;
use crate::ensemble::random::random_ortho_rows;
use crate::ensemble::{column_mask, masked_gram, SparsifierConfig, Stream};
use crate::error::{invalid, Error, Result};
use crate::linalg::{coherence_tau_weights, complex_embed, dft_rows, eigvalsh, Matrix, TauMethod};

/// Stream reserved for drawing the random orthonormal matrix; trial masks
/// use streams `0..trials`.
const MATRIX_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    /// Evenly strided rows of the unitary DFT, real-embedded.
    DftRows,
    /// Seeded Gaussian matrix with orthonormalised rows.
    RandomOrthonormal,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::DftRows => "dft-rows",
            MatrixKind::RandomOrthonormal => "random-orthonormal",
        })
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dft-rows" | "dft" => Ok(MatrixKind::DftRows),
            "random-orthonormal" | "random" => Ok(MatrixKind::RandomOrthonormal),
            other => Err(Error::Parse(format!("unknown matrix kind `{other}`"))),
        }
    }
}

/// How the sampling probability is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PRule {
    Explicit(f64),
    /// `p = ln(n)/n`.
    LogNOverN,
}

impl PRule {
    pub fn resolve(self, n: usize) -> f64 {
        match self {
            PRule::Explicit(p) => p,
            PRule::LogNOverN => (n as f64).ln() / n as f64,
        }
    }
}

impl fmt::Display for PRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PRule::Explicit(p) => write!(f, "{p}"),
            PRule::LogNOverN => f.write_str("log-n-over-n"),
        }
    }
}

impl FromStr for PRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "log-n-over-n" || s == "logn/n" {
            return Ok(PRule::LogNOverN);
        }
        s.parse::<f64>()
            .map(PRule::Explicit)
            .map_err(|_| Error::Parse(format!("p must be a number or `log-n-over-n`, got `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsampleConfig {
    pub n: usize,
    pub r: usize,
    pub kind: MatrixKind,
    pub p_rule: PRule,
    pub trials: usize,
    pub master_seed: u64,
    pub tau_method: TauMethod,
}

impl SubsampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > self.r {
            return Err(invalid(
                "n",
                format!("need 1 <= n <= r, got n = {}, r = {}", self.n, self.r),
            ));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        let p = self.p();
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid("p", format!("must lie in (0, 1), got {p}")));
        }
        Ok(())
    }

    pub fn p(&self) -> f64 {
        self.p_rule.resolve(self.n)
    }
}

/// The row-orthonormal matrix being sampled.
#[derive(Clone, Debug)]
pub enum SubsampleMatrix {
    Real {
        u: Matrix,
    },
    /// Real embedding of an `n × r` complex matrix; the mask over the `r`
    /// complex columns is applied to both column blocks.
    Complex {
        embedded: Matrix,
        weights: Matrix,
    },
}

impl SubsampleMatrix {
    pub fn build(config: &SubsampleConfig) -> Result<Self> {
        match config.kind {
            MatrixKind::DftRows => {
                let d = dft_rows(config.n, config.r)?;
                Ok(SubsampleMatrix::Complex {
                    embedded: complex_embed(&d.re, &d.im)?,
                    weights: d.weights,
                })
            }
            MatrixKind::RandomOrthonormal => {
                let mut rng = Stream::new(config.master_seed, MATRIX_STREAM);
                Ok(SubsampleMatrix::Real {
                    u: random_ortho_rows(&mut rng, config.n, config.r),
                })
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.weights().rows()
    }

    pub fn cols(&self) -> usize {
        self.weights().cols()
    }

    /// Squared magnitudes `|u_ij|²`.
    pub fn weights(&self) -> Matrix {
        match self {
            SubsampleMatrix::Real { u } => {
                Matrix::from_fn(u.rows(), u.cols(), |i, j| u[(i, j)] * u[(i, j)])
            }
            SubsampleMatrix::Complex { weights, .. } => weights.clone(),
        }
    }

    /// Singular values of `UD` for the keep-mask `D`, in decreasing order.
    pub fn singular_values(&self, mask: &[bool]) -> Result<Vec<f64>> {
        let sv = |g| -> Result<Vec<f64>> {
            Ok(eigvalsh(&g)?
                .into_iter()
                .map(|l| l.max(0.0).sqrt())
                .collect())
        };
        match self {
            SubsampleMatrix::Real { u } => sv(masked_gram(u, mask)?),
            SubsampleMatrix::Complex { embedded, .. } => {
                let doubled: Vec<bool> = mask.iter().chain(mask.iter()).copied().collect();
                let all = sv(masked_gram(embedded, &doubled)?)?;
                // the embedding repeats every value twice
                Ok(all.into_iter().step_by(2).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsampleRow {
    pub k: usize,
    pub tau_k: f64,
    pub tau_nk1: f64,
    pub lo: f64,
    pub hi: f64,
    pub empirical_median: f64,
    /// `√p`, the scale the singular values concentrate around.
    pub baseline: f64,
    /// `σ_k(EÛ) = p`.
    pub expected_matrix_sv: f64,
    pub contained: bool,
}

impl SummaryRow for SubsampleRow {
    fn columns() -> &'static [&'static str] {
        &[
            "k",
            "tau_k",
            "tau_nk1",
            "lo",
            "hi",
            "empirical_median",
            "baseline",
            "expected_matrix_sv",
            "contained",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.k.to_string(),
            fmt_f64(self.tau_k),
            fmt_f64(self.tau_nk1),
            fmt_f64(self.lo),
            fmt_f64(self.hi),
            fmt_f64(self.empirical_median),
            fmt_f64(self.baseline),
            fmt_f64(self.expected_matrix_sv),
            self.contained.to_string(),
        ]
    }

    fn pass(&self) -> bool {
        self.contained
    }
}

#[derive(Clone, Debug)]
pub struct SubsampleOutcome {
    pub p: f64,
    pub summary: SummaryTable<SubsampleRow>,
    /// One record per trial holding `σ_1(Û) ≥ … ≥ σ_n(Û)`.
    pub records: Vec<ExperimentRecord>,
    pub wall_seconds: f64,
}

#[derive(Serialize)]
struct SubsampleDigest {
    p: f64,
    contained: usize,
    rows: usize,
}

impl SubsampleOutcome {
    pub fn contained(&self) -> usize {
        self.summary.pass_count()
    }

    pub fn write(&self, dir: &Path, config: &SubsampleConfig) -> Result<OutputPaths> {
        check_output_dir(dir)?;
        let paths = OutputPaths::in_dir(dir, "subsample");
        write_records(&paths.records, &self.records)?;
        write_summary(&paths.summary, &self.summary)?;
        let digest = SubsampleDigest {
            p: self.p,
            contained: self.contained(),
            rows: self.summary.rows.len(),
        };
        let trial_total = self.records.iter().map(|r| r.wall_time).sum();
        write_sidecar(
            &paths.sidecar,
            "subsample",
            config,
            &digest,
            self.wall_seconds,
            trial_total,
        )?;
        Ok(paths)
    }
}

pub fn run_subsample(config: &SubsampleConfig) -> Result<SubsampleOutcome> {
    config.validate()?;
    let start = Instant::now();
    let (n, r, p) = (config.n, config.r, config.p());
    let matrix = SubsampleMatrix::build(config)?;
    let weights = matrix.weights();
    let tau: Vec<f64> = (1..=n)
        .map(|j| coherence_tau_weights(&weights, j, config.tau_method))
        .collect::<Result<_>>()?;

    let sampler = SparsifierConfig::new(p, config.master_seed)?;
    let records: Vec<ExperimentRecord> = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| {
            let t0 = Instant::now();
            let mask = column_mask(&sampler, i, r);
            let sv = matrix.singular_values(&mask)?;
            Ok(ExperimentRecord {
                trial_index: i,
                seed: config.master_seed,
                observables: sv,
                wall_time: t0.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(n);
    for k in 1..=n {
        let (tau_k, tau_nk1) = (tau[k - 1], tau[n - k]);
        let interval = subsample_median_interval(n, k, p, tau_k, tau_nk1)?;
        let column: Vec<f64> = records.iter().map(|rec| rec.observables[k - 1]).collect();
        let median = lower_median(&column);
        rows.push(SubsampleRow {
            k,
            tau_k,
            tau_nk1,
            lo: interval.lo,
            hi: interval.hi,
            empirical_median: median,
            baseline: p.sqrt(),
            expected_matrix_sv: p,
            contained: interval.lo <= median && median <= interval.hi,
        });
    }
    Ok(SubsampleOutcome {
        p,
        summary: SummaryTable { rows },
        records,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}
