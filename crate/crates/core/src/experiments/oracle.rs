//! Exhaustive-enumeration checks of every eigenvalue tail bound on small
//! random finite-support ensembles.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{check_output_dir, write_sidecar, write_summary, OutputPaths};
use super::{SummaryRow, SummaryTable};
use crate::bounds::{
    bennett, bernstein, chernoff_lower, chernoff_upper, default_theta_grid, split_bernstein,
    subexp_bernstein, BennettParams, ChernoffParams, MinimaxEvaluator, SubexpParams,
};
use crate::ensemble::random::{gaussian_matrix, random_psd};
use crate::ensemble::{lambda_k_distribution, DiscreteEnsemble, Side, Stream};
use crate::error::Result;
use crate::linalg::{compress, eigh, eigvalsh, extremal_from_spectrum, Isometry, SymMatrix};

pub const ORACLE_FAMILIES: [&str; 8] = [
    "chernoff-upper",
    "chernoff-lower",
    "bennett",
    "bernstein",
    "split-bernstein",
    "subexp",
    "subexp-split",
    "minimax",
];

const GRID_POINTS: usize = 20;
const PSI_FLOOR: f64 = 1e-12;

/// Independent summands of one oracle instance.
pub type OracleInstance = Vec<DiscreteEnsemble>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub instance: usize,
    pub family: String,
    pub k: usize,
    /// `δ` for the Chernoff families, `t` otherwise.
    pub arg: f64,
    pub exact: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyTally {
    pub family: String,
    pub checks: u64,
    pub violations: u64,
    /// Largest `exact / bound` seen.
    pub max_ratio: f64,
}

impl SummaryRow for FamilyTally {
    fn columns() -> &'static [&'static str] {
        &["family", "checks", "violations", "max_ratio"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.family.clone(),
            self.checks.to_string(),
            self.violations.to_string(),
            super::output::fmt_f64(self.max_ratio),
        ]
    }

    fn pass(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub instances: usize,
    /// Fewest `(k, argument)` points checked on any single instance.
    pub min_points_per_instance: usize,
    pub summary: SummaryTable<FamilyTally>,
    pub violations: Vec<Violation>,
    pub wall_seconds: f64,
}

impl OracleReport {
    pub fn total_violations(&self) -> u64 {
        self.summary.rows.iter().map(|t| t.violations).sum()
    }

    pub fn total_checks(&self) -> u64 {
        self.summary.rows.iter().map(|t| t.checks).sum()
    }

    pub fn write(&self, dir: &Path, seed: u64) -> Result<OutputPaths> {
        check_output_dir(dir)?;
        let paths = OutputPaths::in_dir(dir, "oracle");
        let rows: Vec<_> = self
            .violations
            .iter()
            .enumerate()
            .map(|(i, v)| super::ExperimentRecord {
                trial_index: i as u64,
                seed,
                observables: vec![v.instance as f64, v.k as f64, v.arg, v.exact, v.bound],
                wall_time: 0.0,
            })
            .collect();
        super::output::write_records(&paths.records, &rows)?;
        write_summary(&paths.summary, &self.summary)?;
        #[derive(Serialize)]
        struct Config {
            seed: u64,
            instances: usize,
        }
        let digest = (
            self.total_checks(),
            self.total_violations(),
            self.min_points_per_instance,
        );
        write_sidecar(
            &paths.sidecar,
            "oracle",
            &Config {
                seed,
                instances: self.instances,
            },
            &digest,
            self.wall_seconds,
            self.wall_seconds,
        )?;
        Ok(paths)
    }
}

/// Random instance: dimension 1-4, 1-3 summands, 1-3 positive semidefinite
/// outcomes per summand with random probabilities.
pub fn random_instance(seed: u64, index: u64) -> OracleInstance {
    let mut rng = Stream::new(seed, index);
    let dim = 1 + (rng.next_u64() % 4) as usize;
    let summands = 1 + rng.next_u64() % 3;
    (0..summands)
        .map(|_| {
            let count = 1 + rng.next_u64() % 3;
            let outcomes: Vec<SymMatrix> = (0..count)
                .map(|_| {
                    let base = if rng.next_u64().is_multiple_of(4) {
                        let g = gaussian_matrix(&mut rng, 1, dim);
                        SymMatrix::outer(g.row(0)).scaled(1.0 / dim as f64)
                    } else {
                        random_psd(&mut rng, dim)
                    };
                    base.scaled(2.0 * rng.uniform_open())
                })
                .collect();
            let raw: Vec<f64> = (0..count).map(|_| 0.05 + rng.uniform_open()).collect();
            let total: f64 = raw.iter().sum();
            let mut probs: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let last = probs.len() - 1;
            probs[last] = 1.0 - probs[..last].iter().sum::<f64>();
            DiscreteEnsemble::new(outcomes, probs).expect("valid random ensemble")
        })
        .collect()
}

pub fn run_oracle_suite(seed: u64, instance_count: usize) -> Result<OracleReport> {
    let instances: Vec<OracleInstance> = (0..instance_count as u64)
        .map(|i| random_instance(seed, i))
        .collect();
    run_oracle_on(&instances)
}

/// Checks every applicable bound on every instance.
pub fn run_oracle_on(instances: &[OracleInstance]) -> Result<OracleReport> {
    let start = Instant::now();
    let per_instance: Vec<InstanceResult> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| check_instance(i, inst))
        .collect::<Result<_>>()?;

    let mut tallies: Vec<FamilyTally> = ORACLE_FAMILIES
        .iter()
        .map(|f| FamilyTally {
            family: f.to_string(),
            checks: 0,
            violations: 0,
            max_ratio: 0.0,
        })
        .collect();
    let mut violations = Vec::new();
    let mut min_points = usize::MAX;
    for r in per_instance {
        min_points = min_points.min(r.points);
        for (t, c) in tallies.iter_mut().zip(&r.tallies) {
            t.checks += c.checks;
            t.violations += c.violations;
            t.max_ratio = t.max_ratio.max(c.max_ratio);
        }
        violations.extend(r.violations);
    }
    Ok(OracleReport {
        instances: instances.len(),
        min_points_per_instance: if instances.is_empty() { 0 } else { min_points },
        summary: SummaryTable { rows: tallies },
        violations,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

struct InstanceResult {
    tallies: Vec<FamilyTally>,
    violations: Vec<Violation>,
    points: usize,
}

struct Checker {
    instance: usize,
    result: InstanceResult,
}

impl Checker {
    fn record(&mut self, family: usize, k: usize, arg: f64, exact: f64, bound: f64) {
        let t = &mut self.result.tallies[family];
        t.checks += 1;
        self.result.points += 1;
        if bound > 0.0 {
            t.max_ratio = t.max_ratio.max(exact / bound);
        } else if exact > 0.0 {
            t.max_ratio = f64::INFINITY;
        }
        if exact > bound {
            t.violations += 1;
            self.result.violations.push(Violation {
                instance: self.instance,
                family: ORACLE_FAMILIES[family].to_string(),
                k,
                arg,
                exact,
                bound,
            });
        }
    }
}

/// Exact tail from atoms, counting atoms within rounding distance of the
/// threshold as inside the event so the oracle never under-reports.
fn exact_tail(atoms: &[(f64, f64)], threshold: f64, side: Side) -> f64 {
    let slack = 1e-9 * (1.0 + threshold.abs());
    let p: f64 = atoms
        .iter()
        .filter(|(v, _)| match side {
            Side::AtLeast => *v >= threshold - slack,
            Side::AtMost => *v <= threshold + slack,
        })
        .map(|(_, p)| p)
        .sum();
    p.clamp(0.0, 1.0)
}

fn atom_range(atoms: &[(f64, f64)]) -> (f64, f64) {
    atoms
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (v, _)| {
            (lo.min(*v), hi.max(*v))
        })
}

/// `max_j max_outcome λ_max(VᵀXV)`.
fn psi(ensembles: &[DiscreteEnsemble], v: &Isometry) -> Result<f64> {
    let mut m = f64::NEG_INFINITY;
    for e in ensembles {
        for o in e.outcomes() {
            m = m.max(eigvalsh(&compress(o, v)?)?[0]);
        }
    }
    Ok(m)
}

fn sum_of(ensembles: &[DiscreteEnsemble], f: impl Fn(&DiscreteEnsemble) -> SymMatrix) -> SymMatrix {
    let mut acc = SymMatrix::zeros(ensembles[0].dim());
    for e in ensembles {
        acc.add_assign(&f(e)).expect("shared dimension");
    }
    acc
}

fn linspace(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
}

fn check_instance(index: usize, ens: &[DiscreteEnsemble]) -> Result<InstanceResult> {
    let mut c = Checker {
        instance: index,
        result: InstanceResult {
            tallies: ORACLE_FAMILIES
                .iter()
                .map(|f| FamilyTally {
                    family: f.to_string(),
                    checks: 0,
                    violations: 0,
                    max_ratio: 0.0,
                })
                .collect(),
            violations: Vec::new(),
            points: 0,
        },
    };
    let n = ens[0].dim();
    let theta_grid = default_theta_grid();
    let mean_spec = eigh(&sum_of(ens, DiscreteEnsemble::mean))?;
    let psd = ens
        .iter()
        .map(|e| e.is_psd(1e-10))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|&b| b);

    let centered: Vec<DiscreteEnsemble> = ens.iter().map(DiscreteEnsemble::centered).collect();
    let negated: Vec<DiscreteEnsemble> = centered
        .iter()
        .map(|e| e.map(|o| Ok(o.neg())))
        .collect::<Result<_>>()?;

    for k in 1..=n {
        let atoms = lambda_k_distribution(ens, k)?;
        let (amin, amax) = atom_range(&atoms);
        let ext = extremal_from_spectrum(&mean_spec, k)?;
        let mu = mean_spec.lambda(k);

        if psd && mu > 0.0 {
            let (psi_plus, psi_minus) = (psi(ens, &ext.plus)?, psi(ens, &ext.minus)?);
            if psi_plus > PSI_FLOOR && psi_minus > PSI_FLOOR {
                let params = ChernoffParams {
                    n,
                    k,
                    mu_k: mu,
                    psi_plus,
                    psi_minus,
                };
                let span = (amax / mu - 1.0).max(0.5) * 1.1;
                for delta in linspace(0.0, span, GRID_POINTS + 1).skip(1) {
                    let exact = exact_tail(&atoms, (1.0 + delta) * mu, Side::AtLeast);
                    c.record(0, k, delta, exact, chernoff_upper(&params, delta)?);
                }
                for delta in linspace(0.0, 0.99, GRID_POINTS) {
                    let exact = exact_tail(&atoms, (1.0 - delta) * mu, Side::AtMost);
                    c.record(1, k, delta, exact, chernoff_lower(&params, delta)?);
                }
            }
        }

        // bounded summands are subexponential with B = max‖X‖ and Σ² = E X²
        let b = ens
            .iter()
            .flat_map(|e| e.outcomes())
            .map(|o| eigvalsh(o).map(|v| v[0].abs().max(v[v.len() - 1].abs())))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        if b > PSI_FLOOR {
            let second = compress(&sum_of(ens, DiscreteEnsemble::second_moment), &ext.plus)?;
            let params = SubexpParams {
                n,
                k,
                mu_k: mu,
                sigma2_k: eigvalsh(&second)?[0].max(0.0),
                b,
            };
            for t in linspace(0.0, ((amax - mu) * 1.2).max(0.1), GRID_POINTS) {
                let exact = exact_tail(&atoms, mu + t, Side::AtLeast);
                c.record(5, k, t, exact, subexp_bernstein(&params, t, false)?);
                c.record(6, k, t, exact, subexp_bernstein(&params, t, true)?);
            }
        }

        let evaluator = MinimaxEvaluator::new(ens, k, &ext.plus)?;
        let width = (amax - amin).max(0.1) * 1.2;
        for t in linspace(amin - 0.1 * width, amin + width, GRID_POINTS) {
            let exact = exact_tail(&atoms, t, Side::AtLeast);
            c.record(7, k, t, exact, evaluator.bound(t, &theta_grid)?.value);
        }
    }

    for zero_mean in [&centered, &negated] {
        let second = eigh(&sum_of(zero_mean, DiscreteEnsemble::second_moment))?;
        for k in 1..=n {
            let v_plus = extremal_from_spectrum(&second, k)?.plus;
            let psi_plus = psi(zero_mean, &v_plus)?;
            if psi_plus <= PSI_FLOOR {
                continue;
            }
            let params = BennettParams {
                n,
                k,
                sigma2_k: second.lambda(k).max(0.0),
                psi_plus,
            };
            let atoms = lambda_k_distribution(zero_mean, k)?;
            let (_, amax) = atom_range(&atoms);
            for t in linspace(0.0, amax.max(1e-3) * 1.2, GRID_POINTS) {
                let exact = exact_tail(&atoms, t, Side::AtLeast);
                c.record(2, k, t, exact, bennett(&params, t)?);
                c.record(3, k, t, exact, bernstein(&params, t)?);
                c.record(4, k, t, exact, split_bernstein(&params, t)?);
            }
        }
    }
    Ok(c.result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_bernoulli_corpus() {
        let coin = DiscreteEnsemble::bernoulli(SymMatrix::diag(&[1.0]), 0.5).unwrap();
        let report = run_oracle_on(&[vec![coin.clone(), coin]]).unwrap();
        assert_eq!(report.total_violations(), 0);
        assert!(report.summary.rows[0].checks > 0);
    }

    #[test]
    fn deterministic_corpus() {
        let a = DiscreteEnsemble::deterministic(SymMatrix::diag(&[2.0, 1.0, 0.5]));
        let b = DiscreteEnsemble::deterministic(SymMatrix::identity(3).scaled(0.1));
        let report = run_oracle_on(&[vec![a], vec![b.clone(), b]]).unwrap();
        assert_eq!(report.total_violations(), 0);
    }

    #[test]
    fn random_instances_respect_limits() {
        for i in 0..50 {
            let inst = random_instance(9, i);
            assert!((1..=3).contains(&inst.len()));
            for e in &inst {
                assert!(e.dim() <= 4 && e.support_size() <= 3);
                assert!(e.is_psd(1e-10).unwrap());
            }
        }
    }

    #[test]
    fn small_suite_has_no_violations() {
        let report = run_oracle_suite(5, 10).unwrap();
        assert_eq!(
            report.total_violations(),
            0,
            "{:?}",
            report.violations.first()
        );
        assert!(report.min_points_per_instance >= 20);
    }
}
