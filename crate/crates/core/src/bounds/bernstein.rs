//! Bennett and Bernstein bounds on the k-th eigenvalue.

use serde::{Deserialize, Serialize};

use super::check_index;
use crate::error::{invalid, Result};

/// Inputs to the eigenvalue Bennett/Bernstein bounds for zero-mean summands.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BennettParams {
    pub n: usize,
    pub k: usize,
    /// `σ_k² = λ_k(Σ_j E X_j²)`.
    pub sigma2_k: f64,
    /// `Ψ(V₊)`.
    pub psi_plus: f64,
}

impl BennettParams {
    pub fn validate(&self) -> Result<()> {
        check_index(self.n, self.k)?;
        if !(self.sigma2_k >= 0.0 && self.sigma2_k.is_finite()) {
            return Err(invalid(
                "sigma2_k",
                format!("must be finite and >= 0, got {}", self.sigma2_k),
            ));
        }
        if !(self.psi_plus > 0.0 && self.psi_plus.is_finite()) {
            return Err(invalid(
                "psi_plus",
                format!("must be finite and > 0, got {}", self.psi_plus),
            ));
        }
        Ok(())
    }

    fn factor(&self) -> f64 {
        (self.n - self.k + 1) as f64
    }
}

/// Inputs to the subexponential Bernstein bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubexpParams {
    pub n: usize,
    pub k: usize,
    /// `μ_k = λ_k(Σ_j E X_j)`; the bound concerns `P(λ_k ≥ μ_k + t)`.
    pub mu_k: f64,
    /// `σ_k² = λ_max(Σ_j V₊ᵀΣ_j²V₊)`.
    pub sigma2_k: f64,
    /// Moment growth scale `B`.
    pub b: f64,
}

impl SubexpParams {
    pub fn validate(&self) -> Result<()> {
        check_index(self.n, self.k)?;
        if !self.mu_k.is_finite() {
            return Err(invalid("mu_k", "must be finite"));
        }
        if !(self.sigma2_k >= 0.0 && self.sigma2_k.is_finite()) {
            return Err(invalid(
                "sigma2_k",
                format!("must be finite and >= 0, got {}", self.sigma2_k),
            ));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(invalid(
                "b",
                format!("must be finite and > 0, got {}", self.b),
            ));
        }
        Ok(())
    }
}

/// Bennett function `h(u) = (1+u)·log(1+u) − u` for `u ≥ 0`.
pub fn bennett_h(u: f64) -> f64 {
    if u < 1e-3 {
        // alternating series Σ_{m≥2} (−u)^m / (m(m−1)) avoids cancellation
        let mut term = u * u;
        let mut sum = 0.0;
        for m in 2..10 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * term / (m * (m - 1)) as f64;
            term *= u;
        }
        return sum;
    }
    (1.0 + u) * u.ln_1p() - u
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// `(n−k+1)·exp{−(σ_k²/Ψ²)·h(Ψt/σ_k²)}`; equals `0` when `σ_k² = 0 < t`.
pub fn bennett(params: &BennettParams, t: f64) -> Result<f64> {
    params.validate()?;
    check_t(t)?;
    Ok(bennett_unchecked(params, t))
}

pub(crate) fn bennett_unchecked(params: &BennettParams, t: f64) -> f64 {
    let factor = params.factor();
    if t == 0.0 {
        return factor;
    }
    if params.sigma2_k == 0.0 {
        return 0.0;
    }
    let psi = params.psi_plus;
    let s2 = params.sigma2_k;
    (factor.ln() - s2 / (psi * psi) * bennett_h(psi * t / s2)).exp()
}

/// `(n−k+1)·exp{−(t²/2)/(σ_k² + Ψt/3)}`.
pub fn bernstein(params: &BennettParams, t: f64) -> Result<f64> {
    params.validate()?;
    check_t(t)?;
    Ok(bernstein_unchecked(params, t))
}

pub(crate) fn bernstein_unchecked(params: &BennettParams, t: f64) -> f64 {
    let factor = params.factor();
    if t == 0.0 {
        return factor;
    }
    let denom = params.sigma2_k + params.psi_plus * t / 3.0;
    (factor.ln() - 0.5 * t * t / denom).exp()
}

/// Split Bernstein bound: `exp(−3t²/(8σ_k²))` for `t ≤ σ_k²/Ψ`, otherwise
/// `exp(−3t/(8Ψ))`, both times `n−k+1`.
pub fn split_bernstein(params: &BennettParams, t: f64) -> Result<f64> {
    params.validate()?;
    check_t(t)?;
    Ok(split_bernstein_unchecked(params, t))
}

pub(crate) fn split_bernstein_unchecked(params: &BennettParams, t: f64) -> f64 {
    let factor = params.factor();
    if t == 0.0 {
        return factor;
    }
    let (s2, psi) = (params.sigma2_k, params.psi_plus);
    let exponent = if t <= s2 / psi {
        0.375 * t * t / s2
    } else {
        0.375 * t / psi
    };
    (factor.ln() - exponent).exp()
}

/// Subexponential Bernstein bound on `P(λ_k ≥ μ_k + t)`.
///
/// Unsplit: `(n−k+1)·exp{−(t²/2)/(σ_k² + Bt)}`. Split: `exp(−t²/(4σ_k²))`
/// for `t ≤ σ_k²/B`, otherwise `exp(−t/(4B))`.
pub fn subexp_bernstein(params: &SubexpParams, t: f64, split: bool) -> Result<f64> {
    params.validate()?;
    check_t(t)?;
    Ok(subexp_unchecked(params, t, split))
}

pub(crate) fn subexp_unchecked(params: &SubexpParams, t: f64, split: bool) -> f64 {
    let factor = (params.n - params.k + 1) as f64;
    if t == 0.0 {
        return factor;
    }
    let (s2, b) = (params.sigma2_k, params.b);
    let exponent = if !split {
        0.5 * t * t / (s2 + b * t)
    } else if t <= s2 / b {
        0.25 * t * t / s2
    } else {
        0.25 * t / b
    };
    (factor.ln() - exponent).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, k: usize, s2: f64, psi: f64) -> BennettParams {
        BennettParams {
            n,
            k,
            sigma2_k: s2,
            psi_plus: psi,
        }
    }

    #[test]
    fn t_zero_gives_dimensional_factor() {
        let q = p(5, 2, 1.5, 0.3);
        assert_eq!(bennett(&q, 0.0).unwrap(), 4.0);
        assert_eq!(bernstein(&q, 0.0).unwrap(), 4.0);
        assert_eq!(split_bernstein(&q, 0.0).unwrap(), 4.0);
        let s = SubexpParams {
            n: 5,
            k: 2,
            mu_k: 1.0,
            sigma2_k: 1.0,
            b: 2.0,
        };
        assert_eq!(subexp_bernstein(&s, 0.0, false).unwrap(), 4.0);
        assert_eq!(subexp_bernstein(&s, 0.0, true).unwrap(), 4.0);
    }

    #[test]
    fn bennett_unit_value() {
        // exp(−h(1)) = exp(1 − 2 ln 2) = e/4
        let v = bennett(&p(1, 1, 1.0, 1.0), 1.0).unwrap();
        assert!((v - std::f64::consts::E / 4.0).abs() < 1e-15);
    }

    #[test]
    fn bernstein_unit_value() {
        let v = bernstein(&p(1, 1, 1.0, 1.0), 1.0).unwrap();
        assert!((v - (-0.375_f64).exp()).abs() < 1e-15);
        assert!((v - 0.687289278790972).abs() < 1e-12);
    }

    #[test]
    fn split_boundary_branches_agree() {
        let q = p(3, 1, 2.0, 0.7);
        let t = q.sigma2_k / q.psi_plus;
        let expected = 3.0 * (-0.375 * q.sigma2_k / (q.psi_plus * q.psi_plus)).exp();
        let v = split_bernstein(&q, t).unwrap();
        assert!((v - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn subexp_boundary_identity() {
        let s = SubexpParams {
            n: 1,
            k: 1,
            mu_k: 0.0,
            sigma2_k: 3.0,
            b: 1.5,
        };
        let t = s.sigma2_k / s.b;
        let unsplit_expected = (-s.sigma2_k / (4.0 * s.b * s.b)).exp();
        let unsplit = subexp_bernstein(&s, t, false).unwrap();
        let split = subexp_bernstein(&s, t, true).unwrap();
        assert!((unsplit - unsplit_expected).abs() <= 1e-15);
        assert!((split - unsplit).abs() <= 1e-15);
    }

    #[test]
    fn zero_variance_limits() {
        let q = p(2, 1, 0.0, 1.0);
        assert_eq!(bennett(&q, 0.5).unwrap(), 0.0);
        let b = bernstein(&q, 0.5).unwrap();
        assert!((b - 2.0 * (-0.75_f64).exp()).abs() < 1e-15);
        let s = split_bernstein(&q, 0.5).unwrap();
        assert!((s - 2.0 * (-0.1875_f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn bennett_h_series_matches_closed_form() {
        for &u in &[9.9e-4, 5e-4, 1e-4] {
            let closed = (1.0 + u) * f64::ln_1p(u) - u;
            assert!((bennett_h(u) - closed).abs() < 1e-9 * closed, "u = {u}");
        }
        assert!((bennett_h(1e-9) - 5e-19).abs() < 1e-27);
        assert!((bennett_h(1.0) - (2.0 * std::f64::consts::LN_2 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(bennett(&p(2, 1, 1.0, 1.0), -1.0).is_err());
        assert!(bernstein(&p(2, 1, -1.0, 1.0), 1.0).is_err());
        assert!(split_bernstein(&p(2, 1, 1.0, 0.0), 1.0).is_err());
        assert!(bennett(&p(2, 0, 1.0, 1.0), 1.0).is_err());
    }
}
