use serde::{Deserialize, Serialize};

use super::check_index;
use crate::error::{invalid, Result};

/// Inputs to the eigenvalue Chernoff bounds for a sum of independent
/// positive-semidefinite summands.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffParams {
    /// Ambient dimension.
    pub n: usize,
    /// Eigenvalue index, 1-based.
    pub k: usize,
    /// `μ_k = λ_k(Σ_j E X_j)`.
    pub mu_k: f64,
    /// `Ψ(V₊)`: almost-sure bound on `λ_max(V₊ᵀX_jV₊)`.
    pub psi_plus: f64,
    /// `Ψ(V₋)`: almost-sure bound on `λ_max(V₋ᵀX_jV₋)`.
    pub psi_minus: f64,
}

impl ChernoffParams {
    pub fn validate(&self) -> Result<()> {
        check_index(self.n, self.k)?;
        if !(self.mu_k >= 0.0 && self.mu_k.is_finite()) {
            return Err(invalid(
                "mu_k",
                format!("must be finite and >= 0, got {}", self.mu_k),
            ));
        }
        for (name, v) in [("psi_plus", self.psi_plus), ("psi_minus", self.psi_minus)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// `δ − (1+δ)·log(1+δ)`, the log of `e^δ / (1+δ)^{1+δ}`; nonpositive for `δ ≥ 0`.
pub fn chernoff_upper_exponent(delta: f64) -> f64 {
    delta - (1.0 + delta) * delta.ln_1p()
}

/// `−δ − (1−δ)·log(1−δ)`, the log of `e^{−δ} / (1−δ)^{1−δ}`, extended
/// continuously to `δ = 1` where it equals `−1`.
pub fn chernoff_lower_exponent(delta: f64) -> f64 {
    if delta >= 1.0 {
        return -1.0;
    }
    -delta - (1.0 - delta) * (-delta).ln_1p()
}

/// Upper-tail bound `P(λ_k ≥ (1+δ)μ_k) ≤ (n−k+1)·[e^δ/(1+δ)^{1+δ}]^{μ_k/Ψ(V₊)}`
/// for `δ > 0`.
pub fn chernoff_upper(params: &ChernoffParams, delta: f64) -> Result<f64> {
    params.validate()?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(invalid(
            "delta",
            format!("must be finite and > 0, got {delta}"),
        ));
    }
    Ok(chernoff_upper_unchecked(params, delta))
}

pub(crate) fn chernoff_upper_unchecked(params: &ChernoffParams, delta: f64) -> f64 {
    let factor = (params.n - params.k + 1) as f64;
    let ratio = params.mu_k / params.psi_plus;
    if delta == 0.0 || ratio == 0.0 {
        return factor;
    }
    (factor.ln() + ratio * chernoff_upper_exponent(delta)).exp()
}

/// Lower-tail bound `P(λ_k ≤ (1−δ)μ_k) ≤ k·[e^{−δ}/(1−δ)^{1−δ}]^{μ_k/Ψ(V₋)}`
/// for `δ ∈ [0, 1)`.
pub fn chernoff_lower(params: &ChernoffParams, delta: f64) -> Result<f64> {
    params.validate()?;
    if !(0.0..1.0).contains(&delta) {
        return Err(invalid("delta", format!("must lie in [0, 1), got {delta}")));
    }
    Ok(chernoff_lower_unchecked(params, delta))
}

pub(crate) fn chernoff_lower_unchecked(params: &ChernoffParams, delta: f64) -> f64 {
    let factor = params.k as f64;
    let ratio = params.mu_k / params.psi_minus;
    if delta == 0.0 || ratio == 0.0 {
        return factor;
    }
    (factor.ln() + ratio * chernoff_lower_exponent(delta)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, k: usize, mu: f64, psi: f64) -> ChernoffParams {
        ChernoffParams {
            n,
            k,
            mu_k: mu,
            psi_plus: psi,
            psi_minus: psi,
        }
    }

    #[test]
    fn upper_tends_to_dimensional_factor() {
        let p = unit(5, 2, 3.0, 0.5);
        let v = chernoff_upper(&p, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-9);
    }

    #[test]
    fn upper_at_e_minus_one_is_inverse_e() {
        let p = unit(1, 1, 1.0, 1.0);
        let delta = std::f64::consts::E - 1.0;
        // δ − (1+δ)·ln(1+δ) = (e−1) − e = −1
        let v = chernoff_upper(&p, delta).unwrap();
        assert!((v - (-1.0_f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn upper_bernoulli_pair_value() {
        // e^1 / 2^2
        let p = unit(1, 1, 1.0, 1.0);
        let v = chernoff_upper(&p, 1.0).unwrap();
        assert!((v - std::f64::consts::E / 4.0).abs() < 1e-15);
        assert!((v - 0.679570457114761).abs() < 1e-12);
    }

    #[test]
    fn lower_at_zero_is_k() {
        let p = unit(6, 4, 2.0, 1.0);
        assert_eq!(chernoff_lower(&p, 0.0).unwrap(), 4.0);
    }

    #[test]
    fn lower_limit_near_one() {
        let p = unit(3, 1, 10.0, 1.0);
        let v = chernoff_lower(&p, 1.0 - 1e-9).unwrap();
        assert!((v - (-10.0_f64).exp()).abs() < 1e-9);
        assert!((v - 4.54e-5).abs() < 1e-7);
    }

    #[test]
    fn lower_bernoulli_pair_value() {
        // [e^{-1/2} / (1/2)^{1/2}]^1 = sqrt(2/e) ≈ 0.8578 ≥ 0.25
        let p = unit(1, 1, 1.0, 1.0);
        let v = chernoff_lower(&p, 0.5).unwrap();
        assert!((v - (2.0 / std::f64::consts::E).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        let p = unit(2, 1, 1.0, 1.0);
        assert!(chernoff_upper(&p, 0.0).is_err());
        assert!(chernoff_upper(&p, -1.0).is_err());
        assert!(chernoff_lower(&p, 1.0).is_err());
        assert!(chernoff_lower(&p, -0.1).is_err());
        assert!(chernoff_upper(&unit(2, 3, 1.0, 1.0), 1.0).is_err());
        assert!(chernoff_upper(&unit(2, 1, 1.0, 0.0), 1.0).is_err());
        assert!(chernoff_upper(&unit(2, 1, -1.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn large_ratio_stays_finite() {
        let p = unit(4, 2, 1e6, 1.0);
        let u = chernoff_upper(&p, 0.5).unwrap();
        let l = chernoff_lower(&p, 0.5).unwrap();
        assert!(u.is_finite() && u >= 0.0);
        assert!(l.is_finite() && l >= 0.0);
    }
}
