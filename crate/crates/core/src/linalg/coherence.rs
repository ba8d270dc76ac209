//! Coordinate-subspace bounds on the coherence-like quantity
//! `τ_k = min_{V ∈ 𝕍(k,n)} max_j ‖Vᵀu_j‖²` of a matrix with orthonormal rows.
//!
//! Restricting `V` to coordinate subspaces gives the computable upper bound
//! `min_{|I| = k} max_j Σ_{i∈I} u_ij²`, which is what this module reports.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{invalid, Error, Result};

/// Largest number of `k`-subsets the exhaustive method will enumerate.
pub const MAX_EXACT_SUBSETS: u128 = 1_000_000;

const ROW_ORTHONORMAL_TOL: f64 = 1e-9;

/// `n × r` real matrix with orthonormal rows (`UUᵀ = I`, `r ≥ n`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthoRowMatrix(Matrix);

impl OrthoRowMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() == 0 || m.rows() > m.cols() {
            return Err(Error::DimensionMismatch(format!(
                "orthonormal-row matrix must satisfy 1 <= n <= r, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let err = m.row_orthonormality_error();
        if err > ROW_ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal(err));
        }
        Ok(Self(m))
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Squared entry magnitudes `u_ij²`.
    pub fn squared_magnitudes(&self) -> Matrix {
        let m = &self.0;
        Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] * m[(i, j)])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauMethod {
    /// Minimum over every size-`k` coordinate subset.
    ExactSubsets,
    /// Greedy subset growth; an upper bound on the exact-subsets value.
    Greedy,
}

impl fmt::Display for TauMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauMethod::ExactSubsets => "exact-subsets",
            TauMethod::Greedy => "greedy",
        })
    }
}

impl FromStr for TauMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-subsets" | "exact" => Ok(TauMethod::ExactSubsets),
            "greedy" => Ok(TauMethod::Greedy),
            other => Err(Error::Parse(format!("unknown tau method `{other}`"))),
        }
    }
}

/// Coordinate-subset upper bound on `τ_k` for a real orthonormal-row matrix.
pub fn coherence_tau(u: &OrthoRowMatrix, k: usize, method: TauMethod) -> Result<f64> {
    coherence_tau_weights(&u.squared_magnitudes(), k, method)
}

/// Same as [`coherence_tau`] but on a precomputed nonnegative weight matrix
/// `w_ij = |u_ij|²`, which also covers complex matrices.
pub fn coherence_tau_weights(weights: &Matrix, k: usize, method: TauMethod) -> Result<f64> {
    let n = weights.rows();
    if k == 0 || k > n {
        return Err(invalid("k", format!("must satisfy 1 <= k <= {n}, got {k}")));
    }
    match method {
        TauMethod::ExactSubsets => exact_subsets(weights, k),
        TauMethod::Greedy => Ok(greedy(weights, k)),
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn exact_subsets(w: &Matrix, k: usize) -> Result<f64> {
    let n = w.rows();
    let count = binomial(n, k);
    if count > MAX_EXACT_SUBSETS {
        return Err(Error::SubsetOverflow {
            n,
            k,
            count,
            limit: MAX_EXACT_SUBSETS,
        });
    }
    let mut best = f64::INFINITY;
    let mut sums = vec![0.0; w.cols()];
    search(w, k, 0, &mut sums, &mut best);
    Ok(best)
}

fn search(w: &Matrix, remaining: usize, start: usize, sums: &mut [f64], best: &mut f64) {
    if remaining == 0 {
        let worst = sums.iter().fold(0.0_f64, |m, &s| m.max(s));
        if worst < *best {
            *best = worst;
        }
        return;
    }
    let n = w.rows();
    for i in start..=(n - remaining) {
        let row = w.row(i);
        for (s, &x) in sums.iter_mut().zip(row) {
            *s += x;
        }
        // partial maxima only grow, so a dominated branch can be cut
        let partial = sums.iter().fold(0.0_f64, |m, &s| m.max(s));
        if partial < *best {
            search(w, remaining - 1, i + 1, sums, best);
        }
        for (s, &x) in sums.iter_mut().zip(row) {
            *s -= x;
        }
    }
}

fn greedy(w: &Matrix, k: usize) -> f64 {
    let n = w.rows();
    let mut chosen = vec![false; n];
    let mut sums = vec![0.0; w.cols()];
    let mut current = 0.0;
    for _ in 0..k {
        let mut best: Option<(usize, f64)> = None;
        for i in (0..n).filter(|&i| !chosen[i]) {
            let value = sums
                .iter()
                .zip(w.row(i))
                .fold(0.0_f64, |m, (&s, &x)| m.max(s + x));
            if best.is_none_or(|(_, b)| value < b) {
                best = Some((i, value));
            }
        }
        let (i, value) = best.expect("k <= n leaves a free row");
        chosen[i] = true;
        for (s, &x) in sums.iter_mut().zip(w.row(i)) {
            *s += x;
        }
        current = value;
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_block(n: usize, r: usize) -> OrthoRowMatrix {
        OrthoRowMatrix::new(Matrix::from_fn(n, r, |i, j| if i == j { 1.0 } else { 0.0 })).unwrap()
    }

    #[test]
    fn identity_block_gives_one() {
        let u = identity_block(3, 7);
        for k in 1..=3 {
            for method in [TauMethod::ExactSubsets, TauMethod::Greedy] {
                assert_eq!(coherence_tau(&u, k, method).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn flat_weights_give_k_over_r() {
        let r = 16;
        let w = Matrix::from_fn(4, r, |_, _| 1.0 / r as f64);
        for k in 1..=4 {
            for method in [TauMethod::ExactSubsets, TauMethod::Greedy] {
                let tau = coherence_tau_weights(&w, k, method).unwrap();
                assert_eq!(tau, k as f64 / r as f64);
            }
        }
    }

    #[test]
    fn rejects_invalid_k_and_overflow() {
        let w = Matrix::from_fn(30, 30, |_, _| 1.0 / 30.0);
        assert!(coherence_tau_weights(&w, 0, TauMethod::Greedy).is_err());
        assert!(coherence_tau_weights(&w, 31, TauMethod::Greedy).is_err());
        // C(30, 15) ≈ 1.55e8
        assert!(matches!(
            coherence_tau_weights(&w, 15, TauMethod::ExactSubsets),
            Err(Error::SubsetOverflow { .. })
        ));
        assert!(coherence_tau_weights(&w, 15, TauMethod::Greedy).is_ok());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(8, 3), 56);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(10, 0), 1);
    }

    #[test]
    fn greedy_ties_take_lowest_index() {
        // rows 0 and 1 tie on the first step and row 0 wins
        let w = Matrix::from_rows(&[
            vec![0.5, 0.0, 0.0],
            vec![0.0, 0.5, 0.0],
            vec![0.0, 0.1, 0.6],
        ])
        .unwrap();
        assert_eq!(greedy(&w, 1), 0.5);
        assert_eq!(greedy(&w, 2), 0.5);
        assert_eq!(greedy(&w, 3), 0.6);
    }
}
