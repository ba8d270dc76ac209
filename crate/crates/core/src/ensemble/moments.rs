//! Monte Carlo check of the rank-one Wishart moment dominance
//! `E(ξξᵀ)^m ⪯ 2^m·m!·(tr G)^{m−1}·G` for `ξ ~ N(0, G)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{eigvalsh, SymMatrix};

use super::gaussian::GaussianSampler;
use super::rng::Stream;

pub const MIN_MOMENT_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    /// `λ_min(D·G − estimate)` with `D = 2^m·m!·(tr G)^{m−1}`.
    pub min_eig_margin: f64,
    /// `D·‖G‖`, the scale the tolerance is measured against.
    pub scale: f64,
    pub pass: bool,
}

/// `2^m·m!·(tr G)^{m−1}`.
pub fn dominance_constant(g: &SymMatrix, m: u32) -> f64 {
    let fact: f64 = (1..=m).map(f64::from).product();
    2f64.powi(m as i32) * fact * g.trace().powi(m as i32 - 1)
}

/// `E(ξξᵀ)² = (tr G)·G + 2G²` for real Gaussian `ξ`.
pub fn wishart_second_moment(g: &SymMatrix) -> SymMatrix {
    let mut out = g.scaled(g.trace());
    out.add_scaled_assign(2.0, &g.square()).expect("same dim");
    out
}

/// `λ_min(8(tr G)·G − E(ξξᵀ)²)`, evaluated without sampling.
pub fn second_moment_margin(g: &SymMatrix) -> Result<f64> {
    let mut d = g.scaled(dominance_constant(g, 2));
    d.add_scaled_assign(-1.0, &wishart_second_moment(g))?;
    Ok(*eigvalsh(&d)?.last().expect("dim >= 1"))
}

/// Estimates `E(ξξᵀ)^m = E‖ξ‖^{2(m−1)}ξξᵀ` from `n_samples` draws and
/// compares it with the dominating matrix.
///
/// Passes when the margin is at least `−tol·2^m·m!·(tr G)^{m−1}·‖G‖`.
pub fn verify_moment_lemma(
    g: &SymMatrix,
    m: u32,
    n_samples: usize,
    tol: f64,
    seed: u64,
) -> Result<MomentReport> {
    if !(2..=4).contains(&m) {
        return Err(invalid("m", format!("must lie in 2..=4, got {m}")));
    }
    if n_samples < MIN_MOMENT_SAMPLES {
        return Err(invalid(
            "n_samples",
            format!("must be at least {MIN_MOMENT_SAMPLES}, got {n_samples}"),
        ));
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(invalid("tol", "must be finite and >= 0"));
    }
    let sampler = GaussianSampler::new(g.clone(), seed)?;
    let dim = g.dim();
    let mut rng = Stream::new(seed, 0);
    let mut z = vec![0.0; dim];
    let mut xi = vec![0.0; dim];
    let mut acc = SymMatrix::zeros(dim);
    for _ in 0..n_samples {
        sampler.sample_into(&mut rng, &mut z, &mut xi);
        let norm2: f64 = xi.iter().map(|x| x * x).sum();
        acc.rank_one_update(norm2.powi(m as i32 - 1), &xi);
    }
    let estimate = acc.scaled(1.0 / n_samples as f64);

    let constant = dominance_constant(g, m);
    let mut diff = g.scaled(constant);
    diff.add_scaled_assign(-1.0, &estimate)?;
    let margin = *eigvalsh(&diff)?.last().expect("dim >= 1");
    let g_norm = eigvalsh(g)?[0].max(0.0);
    let scale = constant * g_norm;
    Ok(MomentReport {
        min_eig_margin: margin,
        scale,
        pass: margin >= -tol * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_third_moment() {
        // E ξ⁶ = 15 ≤ 48
        let g = SymMatrix::identity(1);
        assert_eq!(dominance_constant(&g, 3), 48.0);
        let r = verify_moment_lemma(&g, 3, 200_000, 0.1, 4).unwrap();
        assert!(r.pass);
        assert!(
            (r.min_eig_margin - 33.0).abs() < 2.0,
            "{}",
            r.min_eig_margin
        );
    }

    #[test]
    fn zero_matrix_is_trivial() {
        let r = verify_moment_lemma(&SymMatrix::zeros(3), 2, 10_000, 0.0, 1).unwrap();
        assert_eq!(r.min_eig_margin, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn second_moment_closed_form_matches_sampling() {
        let g = SymMatrix::from_rows(&[vec![2.0, 0.3], vec![0.3, 0.5]]).unwrap();
        let exact = second_moment_margin(&g).unwrap();
        let mc = verify_moment_lemma(&g, 2, 400_000, 0.1, 8).unwrap();
        assert!(exact > 0.0);
        assert!((exact - mc.min_eig_margin).abs() < 0.05 * mc.scale);
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = SymMatrix::identity(2);
        assert!(verify_moment_lemma(&g, 1, 10_000, 0.1, 0).is_err());
        assert!(verify_moment_lemma(&g, 5, 10_000, 0.1, 0).is_err());
        assert!(verify_moment_lemma(&g, 2, 100, 0.1, 0).is_err());
        assert!(verify_moment_lemma(&SymMatrix::diag(&[1.0, -1.0]), 2, 10_000, 0.1, 0).is_err());
    }
}
