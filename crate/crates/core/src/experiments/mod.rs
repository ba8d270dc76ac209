//! Reproducible experiment runners.
//!
//! Each trial is keyed by `(master_seed, trial_index)`; trials may run in
//! parallel and are aggregated in trial order, so outputs do not depend on
//! scheduling.

mod covariance;
mod oracle;
pub mod output;
mod subsample;

use serde::{Deserialize, Serialize};

pub use covariance::{run_covariance, CovConfig, CovOutcome, CovRow};
pub use oracle::{
    random_instance, run_oracle_on, run_oracle_suite, FamilyTally, OracleInstance, OracleReport,
    Violation, ORACLE_FAMILIES,
};
pub use subsample::{
    run_subsample, MatrixKind, PRule, SubsampleConfig, SubsampleMatrix, SubsampleOutcome,
    SubsampleRow,
};

/// Observables of one Monte Carlo trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub trial_index: u64,
    /// Master seed; the trial's random stream is `(seed, trial_index)`.
    pub seed: u64,
    pub observables: Vec<f64>,
    /// Seconds spent on this trial. Not written to the CSV files.
    pub wall_time: f64,
}

/// One row of a summary CSV.
pub trait SummaryRow {
    fn columns() -> &'static [&'static str];
    fn fields(&self) -> Vec<String>;
    fn pass(&self) -> bool;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable<R> {
    pub rows: Vec<R>,
}

impl<R: SummaryRow> SummaryTable<R> {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(SummaryRow::pass)
    }

    pub fn pass_count(&self) -> usize {
        self.rows.iter().filter(|r| r.pass()).count()
    }

    /// The table as CSV text, exactly as written to disk.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(R::columns()).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.fields()).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// Lower median: the order statistic of rank `⌈m/2⌉` (1-based).
pub fn lower_median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[v.len().div_ceil(2) - 1]
}
