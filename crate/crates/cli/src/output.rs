//! Record files. CSV files always start with a header row; floats use the
//! shortest representation that parses back to the same value.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use dirsparse::experiments::{AlphaMode, BoundVerdict, QuantileCurve, TrialRecord};
use serde::Serialize;

use crate::args::Format;
use crate::error::CliError;

pub const TRIALS_HEADER: [&str; 5] = [
    "alpha_mode",
    "n",
    "threshold_exponent",
    "trial_index",
    "count",
];
pub const CURVES_HEADER: [&str; 7] = [
    "alpha_mode",
    "n",
    "threshold_exponent",
    "scaled",
    "q25",
    "q50",
    "q75",
];
pub const VERDICTS_HEADER: [&str; 14] = [
    "alpha_mode",
    "n",
    "label",
    "threshold_exponent",
    "k",
    "theoretical_lower_bound",
    "trials",
    "successes",
    "empirical_success_rate",
    "confidence_lower",
    "confidence_upper",
    "pass",
    "demonstrated",
    "rerun",
];

#[derive(Serialize)]
struct TrialRow {
    alpha_mode: String,
    n: usize,
    threshold_exponent: f64,
    trial_index: u64,
    count: usize,
}

#[derive(Serialize)]
struct CurveRow {
    alpha_mode: String,
    n: usize,
    threshold_exponent: f64,
    scaled: bool,
    q25: f64,
    q50: f64,
    q75: f64,
}

#[derive(Serialize)]
struct VerdictRow<'a> {
    alpha_mode: String,
    n: usize,
    label: &'a str,
    threshold_exponent: f64,
    k: f64,
    theoretical_lower_bound: f64,
    trials: usize,
    successes: usize,
    empirical_success_rate: f64,
    confidence_lower: f64,
    confidence_upper: f64,
    pass: bool,
    demonstrated: bool,
    rerun: bool,
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_error(dir))
}

pub fn create_file(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(io_error(path))
}

fn write_rows<T: Serialize>(
    dir: &Path,
    stem: &str,
    format: Format,
    header: &[&str],
    rows: impl Iterator<Item = T>,
) -> Result<PathBuf, CliError> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let mut out = create_file(&path)?;
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(&mut out);
            w.write_record(header)?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush().map_err(io_error(&path))?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &rows.collect::<Vec<_>>())?;
            writeln!(out).map_err(io_error(&path))?;
        }
    }
    out.flush().map_err(io_error(&path))?;
    Ok(path)
}

pub fn write_trials(
    dir: &Path,
    format: Format,
    mode: AlphaMode,
    records: &[TrialRecord],
) -> Result<PathBuf, CliError> {
    let mode = mode.to_string();
    let rows = records.iter().flat_map(|r| {
        let mode = mode.clone();
        r.counts.iter().map(move |c| TrialRow {
            alpha_mode: mode.clone(),
            n: r.n,
            threshold_exponent: c.exponent,
            trial_index: r.trial_index,
            count: c.count,
        })
    });
    write_rows(dir, "trials", format, &TRIALS_HEADER, rows)
}

pub fn write_curves(
    dir: &Path,
    format: Format,
    mode: AlphaMode,
    curves: &[QuantileCurve],
) -> Result<PathBuf, CliError> {
    let rows = curves.iter().map(|c| CurveRow {
        alpha_mode: mode.to_string(),
        n: c.n,
        threshold_exponent: c.threshold_exponent,
        scaled: c.scaled_by_log_n,
        q25: c.q25,
        q50: c.q50,
        q75: c.q75,
    });
    write_rows(dir, "curves", format, &CURVES_HEADER, rows)
}

pub fn write_verdicts(
    dir: &Path,
    format: Format,
    mode: AlphaMode,
    verdicts: &[BoundVerdict],
) -> Result<PathBuf, CliError> {
    let rows = verdicts.iter().map(|v| VerdictRow {
        alpha_mode: mode.to_string(),
        n: v.event.n,
        label: &v.label,
        threshold_exponent: v.threshold_exponent,
        k: v.event.k,
        theoretical_lower_bound: v.theoretical_lower_bound,
        trials: v.trials,
        successes: v.successes,
        empirical_success_rate: v.empirical_success_rate,
        confidence_lower: v.confidence_lower,
        confidence_upper: v.confidence_upper,
        pass: v.pass,
        demonstrated: v.demonstrated,
        rerun: v.rerun,
    });
    write_rows(dir, "verdicts", format, &VERDICTS_HEADER, rows)
}
