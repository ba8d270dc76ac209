//! Inversion of nonincreasing tail bounds: the smallest argument at which a
//! bound drops to a target probability.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::bernstein::{
    bennett_unchecked, bernstein_unchecked, split_bernstein_unchecked, subexp_unchecked,
    BennettParams, SubexpParams,
};
use super::chernoff::{chernoff_lower_unchecked, chernoff_upper_unchecked, ChernoffParams};
use super::covariance::{
    cov_lower_t_limit, cov_rel_over_unchecked, cov_rel_under_unchecked, cov_tail_lower_unchecked,
    cov_tail_upper_unchecked, cov_upper_t_limit, CovSpectrumParams,
};
use crate::error::{invalid, Result};

/// Absolute tolerance on the returned argument.
pub const INVERT_TOL: f64 = 1e-10;

const MONOTONE_GRID: usize = 64;
const MONOTONE_SLACK: f64 = 1e-12;
const MAX_BISECTIONS: usize = 2_000;
/// Bisection continues past `INVERT_TOL` until the bound at the returned
/// argument is this close to the target.
const VALUE_TOL: f64 = 1e-10;

type Evaluator = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A nonincreasing function on `[lo, hi]` (or `[lo, ∞)`).
pub struct BoundCurve {
    f: Evaluator,
    lo: f64,
    hi: f64,
}

impl fmt::Debug for BoundCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundCurve")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .finish_non_exhaustive()
    }
}

impl BoundCurve {
    /// Wraps `f` after spot-checking that it is nonincreasing on 64 points.
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || hi.is_nan() || hi <= lo {
            return Err(invalid(
                "domain",
                format!("need finite lo < hi, got [{lo}, {hi}]"),
            ));
        }
        let curve = Self {
            f: Box::new(f),
            lo,
            hi,
        };
        let mut prev = curve.eval(curve.grid_point(0));
        for i in 1..MONOTONE_GRID {
            let x = curve.grid_point(i);
            let y = curve.eval(x);
            if y.is_nan() || y > prev + MONOTONE_SLACK * prev.abs() {
                return Err(invalid(
                    "curve",
                    format!("not nonincreasing near x = {x} ({prev} then {y})"),
                ));
            }
            prev = y;
        }
        Ok(curve)
    }

    fn grid_point(&self, i: usize) -> f64 {
        if self.hi.is_finite() {
            self.lo + (self.hi - self.lo) * i as f64 / (MONOTONE_GRID - 1) as f64
        } else {
            self.lo + 2f64.powf(i as f64 / 4.0) - 1.0
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Upper Chernoff bound as a function of `δ ≥ 0`.
    pub fn chernoff_upper(params: ChernoffParams) -> Result<Self> {
        params.validate()?;
        Self::new(
            move |d| chernoff_upper_unchecked(&params, d),
            0.0,
            f64::INFINITY,
        )
    }

    /// Lower Chernoff bound on `δ ∈ [0, 1]`, with its limit value at `δ = 1`.
    pub fn chernoff_lower(params: ChernoffParams) -> Result<Self> {
        params.validate()?;
        Self::new(move |d| chernoff_lower_unchecked(&params, d), 0.0, 1.0)
    }

    pub fn bennett(params: BennettParams) -> Result<Self> {
        params.validate()?;
        Self::new(move |t| bennett_unchecked(&params, t), 0.0, f64::INFINITY)
    }

    pub fn bernstein(params: BennettParams) -> Result<Self> {
        params.validate()?;
        Self::new(move |t| bernstein_unchecked(&params, t), 0.0, f64::INFINITY)
    }

    pub fn split_bernstein(params: BennettParams) -> Result<Self> {
        params.validate()?;
        Self::new(
            move |t| split_bernstein_unchecked(&params, t),
            0.0,
            f64::INFINITY,
        )
    }

    pub fn subexp(params: SubexpParams, split: bool) -> Result<Self> {
        params.validate()?;
        Self::new(
            move |t| subexp_unchecked(&params, t, split),
            0.0,
            f64::INFINITY,
        )
    }

    /// Upper covariance deviation bound on `t ∈ [0, 4nλ_k]`.
    pub fn cov_upper(params: CovSpectrumParams, k: usize) -> Result<Self> {
        let hi = cov_upper_t_limit(&params, k)?;
        Self::new(move |t| cov_tail_upper_unchecked(&params, k, t), 0.0, hi)
    }

    /// Lower covariance deviation bound on `t ∈ [0, 4nλ_1]`.
    pub fn cov_lower(params: CovSpectrumParams, k: usize) -> Result<Self> {
        let hi = cov_lower_t_limit(&params, k)?;
        Self::new(move |t| cov_tail_lower_unchecked(&params, k, t), 0.0, hi)
    }

    /// Relative overestimation bound on `ε ∈ [0, 4n]`.
    pub fn cov_rel_over(params: CovSpectrumParams, k: usize) -> Result<Self> {
        cov_upper_t_limit(&params, k)?;
        let hi = 4.0 * params.n_samples as f64;
        Self::new(move |e| cov_rel_over_unchecked(&params, k, e), 0.0, hi)
    }

    /// Relative underestimation bound on `ε ∈ [0, 1]`.
    pub fn cov_rel_under(params: CovSpectrumParams, k: usize) -> Result<Self> {
        cov_upper_t_limit(&params, k)?;
        Self::new(move |e| cov_rel_under_unchecked(&params, k, e), 0.0, 1.0)
    }

    /// `e^{−x}` on `[0, ∞)`.
    pub fn exp_decay() -> Self {
        Self::new(|x| (-x).exp(), 0.0, f64::INFINITY).expect("exp(-x) is decreasing")
    }

    /// The constant `value` on `[0, ∞)`.
    pub fn constant(value: f64) -> Self {
        Self::new(move |_| value, 0.0, f64::INFINITY).expect("constants are nonincreasing")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Inversion {
    /// Smallest argument (to tolerance) where the bound is at most the target.
    Root(f64),
    /// The bound stays above the target on the whole domain.
    NoGuarantee,
}

impl Inversion {
    pub fn root(self) -> Option<f64> {
        match self {
            Inversion::Root(x) => Some(x),
            Inversion::NoGuarantee => None,
        }
    }
}

/// Solves `curve(x) = target` by bisection, keeping `curve(a) > target ≥
/// curve(b)`, and returns the right end `b`.
pub fn invert_bound(curve: &BoundCurve, target: f64) -> Result<Inversion> {
    if !(target > 0.0 && target < 1.0) {
        return Err(invalid(
            "target",
            format!("must lie in (0, 1), got {target}"),
        ));
    }
    let mut a = curve.lo;
    if curve.eval(a) <= target {
        return Ok(Inversion::Root(a));
    }
    let mut b = if curve.hi.is_finite() {
        if curve.eval(curve.hi) > target {
            return Ok(Inversion::NoGuarantee);
        }
        curve.hi
    } else {
        let mut width = 1.0;
        loop {
            let b = curve.lo + width;
            if curve.eval(b) <= target {
                break b;
            }
            if !b.is_finite() || width > 1e300 {
                return Ok(Inversion::NoGuarantee);
            }
            a = b;
            width *= 2.0;
        }
    };
    for _ in 0..MAX_BISECTIONS {
        if b - a <= INVERT_TOL && target - curve.eval(b) <= VALUE_TOL {
            break;
        }
        let m = a + (b - a) / 2.0;
        if m == a || m == b {
            break;
        }
        if curve.eval(m) > target {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(Inversion::Root(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_decay_at_half_is_ln2() {
        let x = invert_bound(&BoundCurve::exp_decay(), 0.5)
            .unwrap()
            .root()
            .unwrap();
        assert!((x - std::f64::consts::LN_2).abs() < 1e-10);
    }

    #[test]
    fn constant_one_has_no_guarantee() {
        assert_eq!(
            invert_bound(&BoundCurve::constant(1.0), 0.5).unwrap(),
            Inversion::NoGuarantee
        );
    }

    #[test]
    fn rejects_increasing_curves_and_bad_targets() {
        assert!(BoundCurve::new(|x| x, 0.0, 1.0).is_err());
        assert!(invert_bound(&BoundCurve::exp_decay(), 1.0).is_err());
        assert!(invert_bound(&BoundCurve::exp_decay(), 0.0).is_err());
    }

    #[test]
    fn chernoff_upper_root_matches_grid_scan() {
        let params = ChernoffParams {
            n: 4,
            k: 4,
            mu_k: 0.3,
            psi_plus: 0.05,
            psi_minus: 0.05,
        };
        let curve = BoundCurve::chernoff_upper(params).unwrap();
        let root = invert_bound(&curve, 0.5).unwrap().root().unwrap();
        // first grid point on [0, 5] whose bound is at most 1/2
        let steps = 1_000_000;
        let scan = (0..=steps)
            .map(|i| 5.0 * i as f64 / steps as f64)
            .find(|&d| curve.eval(d) <= 0.5)
            .unwrap();
        assert!((root - scan).abs() < 1e-5 + 1e-6);
        assert!((curve.eval(root) - 0.5).abs() < 1e-8);
    }

    #[test]
    fn chernoff_lower_no_guarantee_when_limit_exceeds_target() {
        // k·e^{−μ/Ψ} = 2·e^{−0.5} > 1/2
        let params = ChernoffParams {
            n: 3,
            k: 2,
            mu_k: 0.5,
            psi_plus: 1.0,
            psi_minus: 1.0,
        };
        let curve = BoundCurve::chernoff_lower(params).unwrap();
        assert_eq!(invert_bound(&curve, 0.5).unwrap(), Inversion::NoGuarantee);
    }

    #[test]
    fn steep_curves_still_hit_target() {
        let params = ChernoffParams {
            n: 2,
            k: 1,
            mu_k: 1e6,
            psi_plus: 1.0,
            psi_minus: 1.0,
        };
        let curve = BoundCurve::chernoff_upper(params).unwrap();
        let root = invert_bound(&curve, 0.5).unwrap().root().unwrap();
        assert!((curve.eval(root) - 0.5).abs() < 1e-8);
    }
}
