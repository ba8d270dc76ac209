//! CSV and JSON persistence for experiment runs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{ExperimentRecord, SummaryRow, SummaryTable};
use crate::error::{Error, Result};

/// 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// Files written by one experiment run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputPaths {
    pub records: PathBuf,
    pub summary: PathBuf,
    pub sidecar: PathBuf,
}

impl OutputPaths {
    pub fn in_dir(dir: &Path, name: &str) -> Self {
        Self {
            records: dir.join(format!("{name}_records.csv")),
            summary: dir.join(format!("{name}_summary.csv")),
            sidecar: dir.join(format!("{name}.json")),
        }
    }
}

pub fn check_output_dir(dir: &Path) -> Result<()> {
    if !dir.is_dir() {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("output directory `{}` does not exist", dir.display()),
        )));
    }
    Ok(())
}

/// Records file with columns `trial_index, seed, obs_1..obs_m`.
pub fn write_records(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let width = records.first().map_or(0, |r| r.observables.len());
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["trial_index".to_string(), "seed".to_string()];
    header.extend((1..=width).map(|i| format!("obs_{i}")));
    w.write_record(&header)?;
    for r in records {
        if r.observables.len() != width {
            return Err(Error::DimensionMismatch(format!(
                "record {} has {} observables, expected {width}",
                r.trial_index,
                r.observables.len()
            )));
        }
        let mut row = vec![r.trial_index.to_string(), r.seed.to_string()];
        row.extend(r.observables.iter().map(|&x| fmt_f64(x)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<R: SummaryRow>(path: &Path, table: &SummaryTable<R>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(R::columns())?;
    for row in &table.rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a, C: Serialize, S: Serialize> {
    experiment: &'a str,
    version: &'a str,
    config: &'a C,
    summary: &'a S,
    timing: Timing,
}

#[derive(Serialize)]
struct Timing {
    wall_seconds: f64,
    trial_seconds_total: f64,
}

/// JSON sidecar holding the full config, the crate version and timings.
pub fn write_sidecar<C: Serialize, S: Serialize>(
    path: &Path,
    experiment: &str,
    config: &C,
    summary: &S,
    wall_seconds: f64,
    trial_seconds_total: f64,
) -> Result<()> {
    let sidecar = Sidecar {
        experiment,
        version: env!("CARGO_PKG_VERSION"),
        config,
        summary,
        timing: Timing {
            wall_seconds,
            trial_seconds_total,
        },
    };
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &sidecar)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_seventeen_digits() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(f64::NAN), "NaN");
        let x = std::f64::consts::PI;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }
}
