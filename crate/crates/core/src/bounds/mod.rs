//! Tail bounds on the k-th eigenvalue of a sum of independent random
//! self-adjoint matrices, and tools to evaluate and invert them.

mod bernstein;
mod chernoff;
mod covariance;
mod invert;
mod minimax;
mod subsample;

pub use bernstein::{
    bennett, bennett_h, bernstein, split_bernstein, subexp_bernstein, BennettParams, SubexpParams,
};
pub use chernoff::{
    chernoff_lower, chernoff_lower_exponent, chernoff_upper, chernoff_upper_exponent,
    ChernoffParams,
};
pub use covariance::{
    cov_lower_t_limit, cov_rel_bounds, cov_rel_over, cov_rel_under, cov_sample_size,
    cov_sample_size_terms, cov_tail_lower, cov_tail_upper, cov_upper_t_limit, CovSpectrumParams,
    SampleSizeTerm, DEFAULT_C,
};
pub use invert::{invert_bound, BoundCurve, Inversion, INVERT_TOL};
pub use minimax::{
    default_theta_grid, empirical_minimax_bound, log_grid, MinimaxBound, MinimaxEvaluator,
    DEFAULT_THETA_POINTS, DEFAULT_THETA_RANGE,
};
pub use subsample::{subsample_median_interval, MedianInterval};

use crate::error::{invalid, Result};

fn check_index(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if k == 0 || k > n {
        return Err(invalid("k", format!("must satisfy 1 <= k <= {n}, got {k}")));
    }
    Ok(())
}
