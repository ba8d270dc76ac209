//! Eigenvalue deviation bounds for the sample covariance of Gaussian data
//! and the sample-size planner built on them.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const DEFAULT_C: f64 = 1.0 / 32.0;

/// Spectrum of `C` plus the sample count `n` for `Ĉ_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovSpectrumParams {
    /// `λ_1 ≥ … ≥ λ_p`.
    pub spectrum: Vec<f64>,
    pub n_samples: u64,
    pub c: f64,
    /// Allow zero eigenvalues; the dimensional factors then use `rank(C)`.
    pub rank_deficient: bool,
}

impl CovSpectrumParams {
    pub fn new(spectrum: Vec<f64>, n_samples: u64) -> Result<Self> {
        let p = Self {
            spectrum,
            n_samples,
            c: DEFAULT_C,
            rank_deficient: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.spectrum;
        if s.is_empty() {
            return Err(invalid("spectrum", "must be nonempty"));
        }
        if s.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(invalid("spectrum", "entries must be finite and >= 0"));
        }
        if s.windows(2).any(|w| w[1] > w[0]) {
            return Err(invalid("spectrum", "must be weakly decreasing"));
        }
        if s[0] <= 0.0 {
            return Err(invalid("spectrum", "largest eigenvalue must be positive"));
        }
        if !self.rank_deficient && *s.last().expect("nonempty") <= 0.0 {
            return Err(invalid(
                "spectrum",
                "must be positive (enable rank-deficient mode for singular C)",
            ));
        }
        if self.n_samples == 0 {
            return Err(invalid("n_samples", "must be at least 1"));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(invalid("c", "must be finite and > 0"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    /// `p`, or `rank(C)` in rank-deficient mode.
    pub fn effective_dim(&self) -> usize {
        if self.rank_deficient {
            self.spectrum.iter().filter(|&&x| x > 0.0).count()
        } else {
            self.dim()
        }
    }

    fn lambda(&self, k: usize) -> f64 {
        self.spectrum[k - 1]
    }

    fn check_k(&self, k: usize) -> Result<()> {
        self.validate()?;
        let d = self.effective_dim();
        if k == 0 || k > d {
            return Err(invalid("k", format!("must satisfy 1 <= k <= {d}, got {k}")));
        }
        Ok(())
    }

    /// `Σ_{i=k}^{p} λ_i / λ_k`.
    fn over_ratio(&self, k: usize) -> f64 {
        let lk = self.lambda(k);
        self.spectrum[k - 1..self.effective_dim()]
            .iter()
            .map(|x| x / lk)
            .sum()
    }

    /// `(λ_1/λ_k)·Σ_{i=1}^{k} λ_i / λ_k`.
    fn under_ratio(&self, k: usize) -> f64 {
        let lk = self.lambda(k);
        self.lambda(1) / lk * self.spectrum[..k].iter().map(|x| x / lk).sum::<f64>()
    }

    fn over_factor(&self, k: usize) -> f64 {
        (self.effective_dim() - k + 1) as f64
    }
}

/// Largest `t` for which the upper deviation bound is stated: `4nλ_k`.
pub fn cov_upper_t_limit(params: &CovSpectrumParams, k: usize) -> Result<f64> {
    params.check_k(k)?;
    Ok(4.0 * params.n_samples as f64 * params.lambda(k))
}

/// Largest `t` for which the lower deviation bound is stated: `4nλ_1`.
pub fn cov_lower_t_limit(params: &CovSpectrumParams, k: usize) -> Result<f64> {
    params.check_k(k)?;
    Ok(4.0 * params.n_samples as f64 * params.lambda(1))
}

fn check_t(t: f64, limit: f64, name: &str) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    if t > limit {
        return Err(Error::Range(format!(
            "t exceeds {name} (t = {t}, limit = {limit})"
        )));
    }
    Ok(())
}

/// `P(λ̂_k ≥ λ_k + t) ≤ (p−k+1)·exp(−cnt²/(λ_k Σ_{i≥k} λ_i))` for `t ≤ 4nλ_k`.
pub fn cov_tail_upper(params: &CovSpectrumParams, k: usize, t: f64) -> Result<f64> {
    check_t(t, cov_upper_t_limit(params, k)?, "4nλ_k")?;
    Ok(cov_tail_upper_unchecked(params, k, t))
}

pub(crate) fn cov_tail_upper_unchecked(params: &CovSpectrumParams, k: usize, t: f64) -> f64 {
    let lk = params.lambda(k);
    let denom = lk * lk * params.over_ratio(k);
    let n = params.n_samples as f64;
    (params.over_factor(k).ln() - params.c * n * t * t / denom).exp()
}

/// `P(λ̂_k ≤ λ_k − t) ≤ k·exp(−cnt²/(λ_1 Σ_{i≤k} λ_i))` for `t ≤ 4nλ_1`.
pub fn cov_tail_lower(params: &CovSpectrumParams, k: usize, t: f64) -> Result<f64> {
    check_t(t, cov_lower_t_limit(params, k)?, "4nλ_1")?;
    Ok(cov_tail_lower_unchecked(params, k, t))
}

pub(crate) fn cov_tail_lower_unchecked(params: &CovSpectrumParams, k: usize, t: f64) -> f64 {
    let denom = params.lambda(1) * params.spectrum[..k].iter().sum::<f64>();
    let n = params.n_samples as f64;
    ((k as f64).ln() - params.c * n * t * t / denom).exp()
}

/// `P(λ̂_k ≥ (1+ε)λ_k) ≤ (p−k+1)·exp(−cnε²/Σ_{i≥k} λ_i/λ_k)` for `0 ≤ ε ≤ 4n`.
pub fn cov_rel_over(params: &CovSpectrumParams, k: usize, eps: f64) -> Result<f64> {
    params.check_k(k)?;
    let limit = 4.0 * params.n_samples as f64;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(invalid(
            "eps",
            format!("must be finite and >= 0, got {eps}"),
        ));
    }
    if eps > limit {
        return Err(Error::Range(format!(
            "eps exceeds 4n (eps = {eps}, limit = {limit})"
        )));
    }
    Ok(cov_rel_over_unchecked(params, k, eps))
}

pub(crate) fn cov_rel_over_unchecked(params: &CovSpectrumParams, k: usize, eps: f64) -> f64 {
    let n = params.n_samples as f64;
    (params.over_factor(k).ln() - params.c * n * eps * eps / params.over_ratio(k)).exp()
}

/// `P(λ̂_k ≤ (1−ε)λ_k) ≤ k·exp(−cnε²/((λ_1/λ_k)·Σ_{i≤k} λ_i/λ_k))` for
/// `ε ∈ (0, 1]`.
pub fn cov_rel_under(params: &CovSpectrumParams, k: usize, eps: f64) -> Result<f64> {
    params.check_k(k)?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(invalid("eps", format!("must be > 0, got {eps}")));
    }
    if eps > 1.0 {
        return Err(Error::Range(format!("eps exceeds 1 (eps = {eps})")));
    }
    Ok(cov_rel_under_unchecked(params, k, eps))
}

pub(crate) fn cov_rel_under_unchecked(params: &CovSpectrumParams, k: usize, eps: f64) -> f64 {
    let n = params.n_samples as f64;
    ((k as f64).ln() - params.c * n * eps * eps / params.under_ratio(k)).exp()
}

/// `(over, under)` relative deviation bounds at `ε ∈ (0, 1]`.
pub fn cov_rel_bounds(params: &CovSpectrumParams, k: usize, eps: f64) -> Result<(f64, f64)> {
    let under = cov_rel_under(params, k, eps)?;
    Ok((cov_rel_over(params, k, eps)?, under))
}

/// Per-index sample-size requirement from the closed-form inversion
/// `n ≥ S·ln(factor/target)/(cε²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSizeTerm {
    pub k: usize,
    pub over: u64,
    pub under: u64,
}

fn check_plan(params: &CovSpectrumParams, ell: usize, eps: f64, fail_prob: f64) -> Result<()> {
    params.validate()?;
    let d = params.effective_dim();
    if ell == 0 || ell > d {
        return Err(invalid(
            "ell",
            format!("must satisfy 1 <= ell <= {d}, got {ell}"),
        ));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid("eps", format!("must lie in (0, 1], got {eps}")));
    }
    if !(fail_prob > 0.0 && fail_prob < 1.0) {
        return Err(invalid(
            "fail_prob",
            format!("must lie in (0, 1), got {fail_prob}"),
        ));
    }
    Ok(())
}

/// Closed-form per-index requirements; their maximum agrees with
/// [`cov_sample_size`] up to floating-point rounding at integer boundaries.
pub fn cov_sample_size_terms(
    params: &CovSpectrumParams,
    ell: usize,
    eps: f64,
    fail_prob: f64,
) -> Result<Vec<SampleSizeTerm>> {
    check_plan(params, ell, eps, fail_prob)?;
    let target = fail_prob / (2 * ell) as f64;
    let need = |factor: f64, ratio: f64| -> u64 {
        let n = ratio * (factor / target).ln() / (params.c * eps * eps);
        (n.ceil() as u64).max(1)
    };
    Ok((1..=ell)
        .map(|k| SampleSizeTerm {
            k,
            over: need(params.over_factor(k), params.over_ratio(k)),
            under: need(k as f64, params.under_ratio(k)),
        })
        .collect())
}

/// Smallest `n` for which every over/under relative bound with `k ≤ ℓ` is at
/// most `fail_prob/(2ℓ)`, found by doubling then bisection on `n`.
pub fn cov_sample_size(
    params: &CovSpectrumParams,
    ell: usize,
    eps: f64,
    fail_prob: f64,
) -> Result<u64> {
    check_plan(params, ell, eps, fail_prob)?;
    let target = fail_prob / (2 * ell) as f64;
    let ok = |n: u64| {
        let q = CovSpectrumParams {
            n_samples: n,
            ..params.clone()
        };
        (1..=ell).all(|k| {
            cov_rel_over_unchecked(&q, k, eps) <= target
                && cov_rel_under_unchecked(&q, k, eps) <= target
        })
    };
    if ok(1) {
        return Ok(1);
    }
    let mut hi = 2u64;
    while !ok(hi) {
        hi = hi
            .checked_mul(2)
            .ok_or_else(|| Error::Range("required sample size overflows u64".into()))?;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dyadic(p: usize, n: u64) -> CovSpectrumParams {
        CovSpectrumParams::new((0..p).map(|i| 0.5f64.powi(i as i32)).collect(), n).unwrap()
    }

    #[test]
    fn t_zero_gives_dimensional_factors() {
        let q = dyadic(5, 10);
        assert_eq!(cov_tail_upper(&q, 2, 0.0).unwrap(), 4.0);
        assert_eq!(cov_tail_lower(&q, 2, 0.0).unwrap(), 2.0);
    }

    #[test]
    fn flat_two_dimensional_value() {
        let q = CovSpectrumParams::new(vec![1.0, 1.0], 32).unwrap();
        let v = cov_tail_upper(&q, 1, 1.0).unwrap();
        assert!((v - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
        assert!((v - 1.213061319425267).abs() < 1e-12);
    }

    #[test]
    fn range_violation_names_condition() {
        let q = CovSpectrumParams::new(vec![1.0, 0.5], 2).unwrap();
        let limit = cov_upper_t_limit(&q, 2).unwrap();
        assert_eq!(limit, 4.0);
        assert!(cov_tail_upper(&q, 2, limit).is_ok());
        let err = cov_tail_upper(&q, 2, limit * (1.0 + 1e-12)).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
        assert!(err.to_string().contains("t exceeds 4nλ_k"));
        let err = cov_tail_lower(&q, 2, 8.5).unwrap_err();
        assert!(err.to_string().contains("t exceeds 4nλ_1"));
    }

    #[test]
    fn relative_over_value() {
        let q = CovSpectrumParams::new(vec![1.0, 0.5, 0.25, 0.125], 4096).unwrap();
        let (over, _) = cov_rel_bounds(&q, 2, 0.5).unwrap();
        let expected = 3.0 * (-4096.0f64 / (32.0 * 4.0 * 1.75)).exp();
        assert!((over - expected).abs() <= 1e-14 * expected);
    }

    #[test]
    fn relative_under_k1_reduces() {
        let q = dyadic(4, 100);
        let under = cov_rel_under(&q, 1, 0.3).unwrap();
        let expected = (-100.0 * 0.09 / 32.0f64).exp();
        assert!((under - expected).abs() < 1e-15);
        assert!(cov_rel_under(&q, 1, 0.0).is_err());
        assert!(cov_rel_under(&q, 1, 1.5).is_err());
    }

    #[test]
    fn flat_scalar_plan() {
        let q = CovSpectrumParams::new(vec![1.0], 1).unwrap();
        assert_eq!(cov_sample_size(&q, 1, 0.5, 0.1).unwrap(), 384);
        let terms = cov_sample_size_terms(&q, 1, 0.5, 0.1).unwrap();
        assert_eq!((terms[0].over, terms[0].under), (384, 384));
    }

    #[test]
    fn plan_matches_closed_form_terms() {
        let q = dyadic(8, 1);
        for ell in 1..=4 {
            let n = cov_sample_size(&q, ell, 0.5, 0.1).unwrap();
            let max_term = cov_sample_size_terms(&q, ell, 0.5, 0.1)
                .unwrap()
                .iter()
                .map(|t| t.over.max(t.under))
                .max()
                .unwrap();
            assert_eq!(n, max_term, "ell = {ell}");
        }
    }

    #[test]
    fn rank_deficient_mode_uses_rank() {
        let mut q = CovSpectrumParams {
            spectrum: vec![1.0, 1.0, 0.0],
            n_samples: 32,
            c: DEFAULT_C,
            rank_deficient: false,
        };
        assert!(q.validate().is_err());
        q.rank_deficient = true;
        assert_eq!(q.effective_dim(), 2);
        assert_eq!(cov_tail_upper(&q, 1, 0.0).unwrap(), 2.0);
        assert!(cov_tail_upper(&q, 3, 0.0).is_err());
    }
}
