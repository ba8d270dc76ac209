//! Finitely supported random matrices and exact tail enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{eigvalsh, SymMatrix};

/// Largest product support the enumerator will visit.
pub const MAX_SUPPORT: u128 = 1_000_000;

const PROB_SUM_TOL: f64 = 1e-12;

/// A random symmetric matrix taking finitely many values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteEnsemble {
    outcomes: Vec<SymMatrix>,
    probs: Vec<f64>,
}

impl DiscreteEnsemble {
    pub fn new(outcomes: Vec<SymMatrix>, probs: Vec<f64>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(invalid("outcomes", "must be nonempty"));
        }
        if outcomes.len() != probs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} outcomes but {} probabilities",
                outcomes.len(),
                probs.len()
            )));
        }
        let dim = outcomes[0].dim();
        if outcomes.iter().any(|o| o.dim() != dim) {
            return Err(Error::DimensionMismatch(
                "outcomes differ in dimension".into(),
            ));
        }
        if probs.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(invalid("probs", "every probability must be positive"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(invalid("probs", format!("must sum to 1, got {total}")));
        }
        Ok(Self { outcomes, probs })
    }

    pub fn deterministic(a: SymMatrix) -> Self {
        Self {
            outcomes: vec![a],
            probs: vec![1.0],
        }
    }

    /// `a` with probability `p`, zero otherwise.
    pub fn bernoulli(a: SymMatrix, p: f64) -> Result<Self> {
        let zero = SymMatrix::zeros(a.dim());
        Self::new(vec![a, zero], vec![p, 1.0 - p])
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].dim()
    }

    pub fn outcomes(&self) -> &[SymMatrix] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn support_size(&self) -> usize {
        self.outcomes.len()
    }

    /// `E X`.
    pub fn mean(&self) -> SymMatrix {
        self.weighted_sum(|o| o.clone())
    }

    /// `E X²`.
    pub fn second_moment(&self) -> SymMatrix {
        self.weighted_sum(SymMatrix::square)
    }

    fn weighted_sum(&self, f: impl Fn(&SymMatrix) -> SymMatrix) -> SymMatrix {
        let mut acc = SymMatrix::zeros(self.dim());
        for (o, &p) in self.outcomes.iter().zip(&self.probs) {
            acc.add_scaled_assign(p, &f(o)).expect("shared dimension");
        }
        acc
    }

    /// Every outcome has `λ_min ≥ −tol`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        for o in &self.outcomes {
            let v = eigvalsh(o)?;
            if *v.last().expect("dim >= 1") < -tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same ensemble shifted to zero mean: `X − E X`.
    pub fn centered(&self) -> Self {
        let mean = self.mean();
        Self {
            outcomes: self
                .outcomes
                .iter()
                .map(|o| o.sub(&mean).expect("shared dimension"))
                .collect(),
            probs: self.probs.clone(),
        }
    }

    /// Applies `f` to every outcome, keeping the probabilities.
    pub fn map(&self, f: impl Fn(&SymMatrix) -> Result<SymMatrix>) -> Result<Self> {
        Ok(Self {
            outcomes: self.outcomes.iter().map(f).collect::<Result<_>>()?,
            probs: self.probs.clone(),
        })
    }
}

/// Which side of the threshold a tail event refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `λ_k ≥ threshold`
    AtLeast,
    /// `λ_k ≤ threshold`
    AtMost,
}

/// Size of the product support of independent ensembles.
pub fn product_support(ensembles: &[DiscreteEnsemble]) -> Result<usize> {
    let size = ensembles
        .iter()
        .try_fold(1u128, |acc, e| acc.checked_mul(e.support_size() as u128))
        .unwrap_or(u128::MAX);
    if size > MAX_SUPPORT {
        return Err(Error::SupportExplosion {
            size,
            limit: MAX_SUPPORT,
        });
    }
    Ok(size as usize)
}

fn check_ensembles(ensembles: &[DiscreteEnsemble]) -> Result<usize> {
    let first = ensembles
        .first()
        .ok_or_else(|| invalid("ensembles", "need at least one summand"))?;
    if ensembles.iter().any(|e| e.dim() != first.dim()) {
        return Err(Error::DimensionMismatch(
            "summands differ in dimension".into(),
        ));
    }
    product_support(ensembles)?;
    Ok(first.dim())
}

/// Visits every joint outcome of the independent sum `Σ_j X_j` in a fixed
/// mixed-radix order (last summand varies fastest), passing its probability
/// and the summed matrix.
pub fn for_each_outcome(
    ensembles: &[DiscreteEnsemble],
    mut f: impl FnMut(f64, &SymMatrix) -> Result<()>,
) -> Result<()> {
    let dim = check_ensembles(ensembles)?;
    let mut index = vec![0usize; ensembles.len()];
    loop {
        let mut prob = 1.0;
        let mut sum = SymMatrix::zeros(dim);
        for (e, &i) in ensembles.iter().zip(&index) {
            prob *= e.probs[i];
            sum.add_assign(&e.outcomes[i])?;
        }
        f(prob, &sum)?;

        let mut pos = ensembles.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < ensembles[pos].support_size() {
                break;
            }
            index[pos] = 0;
        }
    }
}

/// Exact law of `λ_k(Σ_j X_j)` as `(value, probability)` atoms in
/// enumeration order.
pub fn lambda_k_distribution(ensembles: &[DiscreteEnsemble], k: usize) -> Result<Vec<(f64, f64)>> {
    let dim = check_ensembles(ensembles)?;
    if k == 0 || k > dim {
        return Err(invalid(
            "k",
            format!("must satisfy 1 <= k <= {dim}, got {k}"),
        ));
    }
    let mut atoms = Vec::new();
    for_each_outcome(ensembles, |p, sum| {
        atoms.push((eigvalsh(sum)?[k - 1], p));
        Ok(())
    })?;
    Ok(atoms)
}

/// Tail probability of an atom list, summed in list order.
pub fn tail_from_atoms(atoms: &[(f64, f64)], threshold: f64, side: Side) -> f64 {
    let total: f64 = atoms
        .iter()
        .filter(|(v, _)| match side {
            Side::AtLeast => *v >= threshold,
            Side::AtMost => *v <= threshold,
        })
        .map(|(_, p)| p)
        .sum();
    total.clamp(0.0, 1.0)
}

/// Exact `P(λ_k(Σ_j X_j) ≥ threshold)` (or `≤`) by full enumeration.
pub fn enumerate_tail(
    ensembles: &[DiscreteEnsemble],
    k: usize,
    threshold: f64,
    side: Side,
) -> Result<f64> {
    Ok(tail_from_atoms(
        &lambda_k_distribution(ensembles, k)?,
        threshold,
        side,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(x: f64) -> SymMatrix {
        SymMatrix::diag(&[x])
    }

    fn coin() -> DiscreteEnsemble {
        DiscreteEnsemble::bernoulli(scalar(1.0), 0.5).unwrap()
    }

    #[test]
    fn deterministic_outcome_at_its_eigenvalue() {
        let a = SymMatrix::diag(&[3.0, 1.0, 2.0]);
        let e = DiscreteEnsemble::deterministic(a);
        assert_eq!(enumerate_tail(&[e], 2, 2.0, Side::AtLeast).unwrap(), 1.0);
    }

    #[test]
    fn two_coins_reach_two_with_quarter_probability() {
        let p = enumerate_tail(&[coin(), coin()], 1, 2.0, Side::AtLeast).unwrap();
        assert_eq!(p, 0.25);
        let q = enumerate_tail(&[coin(), coin()], 1, 0.5, Side::AtMost).unwrap();
        assert_eq!(q, 0.25);
    }

    #[test]
    fn threshold_below_support_is_certain() {
        let p = enumerate_tail(&[coin(), coin()], 1, -1.0, Side::AtLeast).unwrap();
        assert_eq!(p, 1.0);
    }

    #[test]
    fn validates_construction() {
        assert!(DiscreteEnsemble::new(vec![], vec![]).is_err());
        assert!(DiscreteEnsemble::new(vec![scalar(1.0)], vec![0.9]).is_err());
        assert!(DiscreteEnsemble::new(vec![scalar(1.0), scalar(2.0)], vec![1.0, 0.0]).is_err());
        assert!(
            DiscreteEnsemble::new(vec![scalar(1.0), SymMatrix::identity(2)], vec![0.5, 0.5])
                .is_err()
        );
    }

    #[test]
    fn support_explosion_is_reported() {
        let e = DiscreteEnsemble::new((0..10).map(|i| scalar(i as f64)).collect(), vec![0.1; 10])
            .unwrap();
        let many = vec![e; 7];
        assert!(matches!(
            enumerate_tail(&many, 1, 0.0, Side::AtLeast),
            Err(Error::SupportExplosion { .. })
        ));
    }

    #[test]
    fn moments_and_centering() {
        let e = DiscreteEnsemble::new(vec![scalar(2.0), scalar(-1.0)], vec![0.25, 0.75]).unwrap();
        assert!((e.mean()[(0, 0)] - (-0.25)).abs() < 1e-15);
        assert!((e.second_moment()[(0, 0)] - 1.75).abs() < 1e-15);
        assert!(e.centered().mean()[(0, 0)].abs() < 1e-15);
        assert!(!e.is_psd(1e-10).unwrap());
    }
}
