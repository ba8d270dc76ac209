//! Numeric evaluation of the minimax Laplace transform bound
//! `P(λ_k(Y) ≥ t) ≤ inf_θ e^{−θt}·E tr exp(θ VᵀYV)` for a fixed
//! `(n−k+1)`-dimensional isometry `V` and finitely supported summands.

use serde::{Deserialize, Serialize};

use crate::ensemble::{for_each_outcome, DiscreteEnsemble};
use crate::error::{invalid, Error, Result};
use crate::linalg::{compress, eigvalsh, Isometry};

pub const DEFAULT_THETA_POINTS: usize = 256;
pub const DEFAULT_THETA_RANGE: (f64, f64) = (1e-3, 1e3);

const GOLDEN_ITERATIONS: usize = 80;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimaxBound {
    pub value: f64,
    /// The minimising `θ`.
    pub theta: f64,
}

/// 256 log-spaced points on `[1e-3, 1e3]`.
pub fn default_theta_grid() -> Vec<f64> {
    log_grid(
        DEFAULT_THETA_RANGE.0,
        DEFAULT_THETA_RANGE.1,
        DEFAULT_THETA_POINTS,
    )
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// The law of the compressed sum `VᵀYV`, kept as log-weighted eigenvalue
/// lists so the Laplace objective can be evaluated at many `(θ, t)`.
#[derive(Clone, Debug)]
pub struct MinimaxEvaluator {
    k: usize,
    atoms: Vec<(f64, Vec<f64>)>,
}

impl MinimaxEvaluator {
    pub fn new(ensembles: &[DiscreteEnsemble], k: usize, v: &Isometry) -> Result<Self> {
        let n = ensembles
            .first()
            .ok_or_else(|| invalid("ensembles", "need at least one summand"))?
            .dim();
        if k == 0 || k > n {
            return Err(invalid("k", format!("must satisfy 1 <= k <= {n}, got {k}")));
        }
        if v.ambient_dim() != n || v.subspace_dim() != n - k + 1 {
            return Err(Error::DimensionMismatch(format!(
                "isometry must be {}x{}, got {}x{}",
                n,
                n - k + 1,
                v.ambient_dim(),
                v.subspace_dim()
            )));
        }
        let mut atoms = Vec::new();
        for_each_outcome(ensembles, |p, sum| {
            atoms.push((p.ln(), eigvalsh(&compress(sum, v)?)?));
            Ok(())
        })?;
        Ok(Self { k, atoms })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `−θt + log E tr exp(θ VᵀYV)` by log-sum-exp over outcomes and
    /// eigenvalues, accumulated in enumeration order.
    fn log_objective(&self, theta: f64, t: f64) -> f64 {
        let peak = self
            .atoms
            .iter()
            .map(|(lp, eig)| lp + theta * eig[0])
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = self
            .atoms
            .iter()
            .flat_map(|(lp, eig)| eig.iter().map(move |&e| (lp + theta * e - peak).exp()))
            .sum();
        peak + sum.ln() - theta * t
    }

    /// Grid minimum of the bound at threshold `t`, refined by golden-section
    /// search in `ln θ` between the neighbours of the best grid point.
    pub fn bound(&self, t: f64, theta_grid: &[f64]) -> Result<MinimaxBound> {
        if !t.is_finite() {
            return Err(invalid("t", "must be finite"));
        }
        if theta_grid.is_empty() || theta_grid.iter().any(|&th| !(th > 0.0 && th.is_finite())) {
            return Err(invalid(
                "theta_grid",
                "must be a nonempty list of positive finite values",
            ));
        }
        let mut best = (0, f64::INFINITY);
        for (i, &th) in theta_grid.iter().enumerate() {
            let lv = self.log_objective(th, t);
            if lv < best.1 {
                best = (i, lv);
            }
        }
        let (i, mut log_value) = best;
        let mut theta = theta_grid[i];

        if theta_grid.len() >= 3 {
            let lo = theta_grid[i.saturating_sub(1)].ln();
            let hi = theta_grid[(i + 1).min(theta_grid.len() - 1)].ln();
            let (x, fx) =
                golden_section(|x| self.log_objective(x.exp(), t), lo.min(hi), lo.max(hi));
            if fx < log_value {
                log_value = fx;
                theta = x.exp();
            }
        }
        Ok(MinimaxBound {
            value: log_value.exp(),
            theta,
        })
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimises the Laplace transform bound for `P(λ_k(Σ_j X_j) ≥ t)` over
/// `theta_grid`.
pub fn empirical_minimax_bound(
    ensembles: &[DiscreteEnsemble],
    k: usize,
    t: f64,
    v: &Isometry,
    theta_grid: &[f64],
) -> Result<MinimaxBound> {
    MinimaxEvaluator::new(ensembles, k, v)?.bound(t, theta_grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{enumerate_tail, Side};
    use crate::linalg::{extremal_isometries, SymMatrix};

    #[test]
    fn deterministic_outcome_above_lambda_k_vanishes() {
        let a = SymMatrix::diag(&[3.0, 2.0, 1.0]);
        let k = 2;
        let t = 2.5;
        let v = extremal_isometries(&a, k).unwrap().plus;
        let grid = log_grid(1e-2, 50.0 / (t - 2.0), 256);
        let e = DiscreteEnsemble::deterministic(a);
        let b = empirical_minimax_bound(&[e], k, t, &v, &grid).unwrap();
        assert!(b.value <= 1e-6, "{}", b.value);
    }

    #[test]
    fn single_theta_matches_direct_formula() {
        let x = SymMatrix::diag(&[1.0, 0.0]);
        let e = DiscreteEnsemble::bernoulli(x, 0.5).unwrap();
        let v = Isometry::identity(2);
        let theta = 0.7;
        let t = 1.2;
        let b = empirical_minimax_bound(&[e.clone(), e], 1, t, &v, &[theta]).unwrap();
        // outcomes: sum diag(s, 0), s ∈ {0,1,2} w.p. 1/4, 1/2, 1/4
        let direct = (-theta * t).exp()
            * (0.25 * (1.0 + 1.0)
                + 0.5 * ((theta).exp() + 1.0)
                + 0.25 * ((2.0 * theta).exp() + 1.0));
        assert!((b.value - direct).abs() < 1e-14 * direct);
        assert_eq!(b.theta, theta);
    }

    #[test]
    fn dominates_exact_tail() {
        let x = SymMatrix::from_rows(&[vec![1.0, 0.4], vec![0.4, 0.3]]).unwrap();
        let e = DiscreteEnsemble::bernoulli(x, 0.3).unwrap();
        let ens = vec![e.clone(), e.clone(), e];
        for k in 1..=2 {
            let mean_sum = ens[0].mean().scaled(3.0);
            let v = extremal_isometries(&mean_sum, k).unwrap().plus;
            for &t in &[0.0, 0.5, 1.0, 2.0, 3.5] {
                let exact = enumerate_tail(&ens, k, t, Side::AtLeast).unwrap();
                let b = empirical_minimax_bound(&ens, k, t, &v, &default_theta_grid()).unwrap();
                assert!(exact <= b.value, "k={k} t={t}: {exact} > {}", b.value);
            }
        }
    }

    #[test]
    fn rejects_wrong_isometry_dimension() {
        let e = DiscreteEnsemble::deterministic(SymMatrix::identity(3));
        let v = Isometry::identity(3);
        assert!(empirical_minimax_bound(&[e], 2, 1.0, &v, &[1.0]).is_err());
    }
}
