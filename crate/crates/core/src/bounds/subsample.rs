//! Median interval for the singular values of a Bernoulli column sample of a
//! matrix with orthonormal rows.

use serde::{Deserialize, Serialize};

use super::chernoff::ChernoffParams;
use super::invert::{invert_bound, BoundCurve};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MedianInterval {
    pub lo: f64,
    pub hi: f64,
    /// Root of the upper bound at 1/2.
    pub delta_plus: f64,
    /// Root of the lower bound at 1/2, absent when the bound never drops to 1/2.
    pub delta_minus: Option<f64>,
}

/// Interval `[√((1−δ⁻)p), √((1+δ⁺)p)]` likely to contain the median of
/// `σ_k(Û)`, where `δ±` solve the Chernoff-type bounds `= 1/2` with
/// `μ = p`, `Ψ(V₊) = τ_{n−k+1}` and `Ψ(V₋) = τ_k`. The lower end is 0 when
/// the lower bound gives no guarantee.
pub fn subsample_median_interval(
    n: usize,
    k: usize,
    p: f64,
    tau_k: f64,
    tau_nk1: f64,
) -> Result<MedianInterval> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("p", format!("must lie in (0, 1), got {p}")));
    }
    let params = ChernoffParams {
        n,
        k,
        mu_k: p,
        psi_plus: tau_nk1,
        psi_minus: tau_k,
    };
    params.validate()?;

    let delta_plus = invert_bound(&BoundCurve::chernoff_upper(params)?, 0.5)?
        .root()
        .expect("upper bound decays to zero");
    let delta_minus = invert_bound(&BoundCurve::chernoff_lower(params)?, 0.5)?.root();
    Ok(MedianInterval {
        lo: delta_minus.map_or(0.0, |d| ((1.0 - d) * p).sqrt()),
        hi: ((1.0 + delta_plus) * p).sqrt(),
        delta_plus,
        delta_minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::chernoff::{chernoff_lower_exponent, chernoff_upper_exponent};

    #[test]
    fn collapses_to_sqrt_p_as_tau_vanishes() {
        let p = 0.3;
        let i = subsample_median_interval(4, 2, p, 1e-9, 1e-9).unwrap();
        assert!((i.hi - p.sqrt()).abs() < 1e-3);
        assert!((i.lo - p.sqrt()).abs() < 1e-3);
        assert!(i.lo <= p.sqrt() && p.sqrt() <= i.hi);
    }

    #[test]
    fn k_equals_n_upper_end() {
        let p = 0.2;
        let i = subsample_median_interval(5, 5, p, 5.0 / 64.0, 1e-8).unwrap();
        assert!((i.hi - p.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn flat_matrix_matches_grid_scan() {
        // 4 × 16 flat matrix: τ_k = k/16
        let (n, k, p) = (4, 1, 0.5);
        let i = subsample_median_interval(n, k, p, 1.0 / 16.0, 4.0 / 16.0).unwrap();
        let up = |d: f64| 4.0 * ((p / 0.25) * chernoff_upper_exponent(d)).exp();
        let down = |d: f64| ((p / 0.0625) * chernoff_lower_exponent(d)).exp();
        let steps = 1_000_000;
        let scan_up = (1..=steps)
            .map(|s| 10.0 * s as f64 / steps as f64)
            .find(|&d| up(d) <= 0.5)
            .unwrap();
        let scan_down = (1..=steps)
            .map(|s| s as f64 / steps as f64)
            .find(|&d| down(d) <= 0.5)
            .unwrap();
        assert!((i.delta_plus - scan_up).abs() < 1e-5 + 1e-9);
        assert!((i.delta_minus.unwrap() - scan_down).abs() < 1e-6 + 1e-9);
    }

    #[test]
    fn coherent_matrix_has_no_lower_guarantee() {
        // k·e^{−p/τ_k} = 1·e^{−0.1} > 1/2
        let i = subsample_median_interval(3, 1, 0.1, 1.0, 1.0).unwrap();
        assert_eq!(i.lo, 0.0);
        assert!(i.delta_minus.is_none());
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(subsample_median_interval(3, 1, 0.0, 0.1, 0.1).is_err());
        assert!(subsample_median_interval(3, 1, 1.0, 0.1, 0.1).is_err());
        assert!(subsample_median_interval(3, 1, 0.5, 0.0, 0.1).is_err());
    }
}
