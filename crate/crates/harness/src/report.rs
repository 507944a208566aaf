//! File outputs: per-trial traces, run summaries, and paired-comparison
//! reports.
//!
//! All numbers are written with Rust's shortest round-trip float formatting,
//! so identical runs produce byte-identical files.  Smoothing touches only
//! the separately exported plot curves; every metric and summary column is
//! computed from raw data.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::scenario::{ScenarioOutcome, TrialOutcome};
use crate::stats::{benjamini_hochberg, bootstrap_band, gaussian_smooth, wilcoxon_signed_rank};

/// Alphabetic state label: 0 -> "A", 1 -> "B", ...
pub fn state_label(index: usize) -> String {
    if index < 26 {
        char::from(b'A' + index as u8).to_string()
    } else {
        format!("S{index}")
    }
}

fn fmt(value: f64) -> String {
    format!("{value}")
}

/// Writes every artifact of a finished run into `out_dir`.
///
/// Produces `scenario.json`, one `records_sXX_tYY.csv` per (scan point,
/// trial), optional smoothed plot curves, `summary.csv`, and `areas.csv`
/// for scans with at least two points.  Returns the paths written.
pub fn write_outputs(
    outcome: &ScenarioOutcome,
    out_dir: &Path,
    smooth_sigma: f64,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let config_path = out_dir.join("scenario.json");
    std::fs::write(&config_path, serde_json::to_string_pretty(&outcome.config)?)?;
    written.push(config_path);

    let ensemble_size = outcome.config.initial_states.len();
    for trial in &outcome.trials {
        let path = out_dir.join(format!(
            "records_s{:02}_t{:02}.csv",
            trial.scan_index, trial.trial
        ));
        write_record_csv(trial, ensemble_size, &path)?;
        written.push(path);
        if smooth_sigma > 0.0 {
            let path = out_dir.join(format!(
                "records_s{:02}_t{:02}_smooth.csv",
                trial.scan_index, trial.trial
            ));
            write_smoothed_csv(trial, smooth_sigma, &path)?;
            written.push(path);
        }
    }

    let summary_path = out_dir.join("summary.csv");
    write_summary_csv(outcome, &summary_path)?;
    written.push(summary_path);

    if let Some(areas) = &outcome.scan_areas {
        let path = out_dir.join("areas.csv");
        let mut writer = csv::Writer::from_path(&path)?;
        writer.write_record(["trial", "trace_error_area"])?;
        for (t, area) in areas.iter().enumerate() {
            writer.write_record([t.to_string(), fmt(*area)])?;
        }
        writer.flush()?;
        written.push(path);
    }

    Ok(written)
}

fn write_record_csv(trial: &TrialOutcome, ensemble_size: usize, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec![
        "iteration".to_string(),
        "cost".to_string(),
        "trace".to_string(),
        "gradient_norm".to_string(),
        "cost_error".to_string(),
        "trace_error".to_string(),
    ];
    for j in 0..ensemble_size {
        header.push(format!("e_{}", state_label(j)));
    }
    writer.write_record(&header)?;
    for (it, (ce, te)) in trial
        .record
        .iterations
        .iter()
        .zip(trial.cost_error_curve.iter().zip(&trial.trace_error_curve))
    {
        let mut row = vec![
            it.iteration.to_string(),
            fmt(it.cost),
            fmt(it.trace),
            fmt(it.gradient_norm),
            fmt(*ce),
            fmt(*te),
        ];
        for e in &it.per_state_energies {
            row.push(fmt(*e));
        }
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

fn write_smoothed_csv(trial: &TrialOutcome, sigma: f64, path: &Path) -> Result<()> {
    let cost = gaussian_smooth(&trial.cost_error_curve, sigma)?;
    let trace = gaussian_smooth(&trial.trace_error_curve, sigma)?;
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["iteration", "cost_error", "trace_error"])?;
    for (i, (c, t)) in cost.iter().zip(&trace).enumerate() {
        writer.write_record([i.to_string(), fmt(*c), fmt(*t)])?;
    }
    writer.flush()?;
    Ok(())
}

fn write_summary_csv(outcome: &ScenarioOutcome, path: &Path) -> Result<()> {
    let ensemble_size = outcome.config.initial_states.len();
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec![
        "scan_variable".to_string(),
        "scan_value".to_string(),
        "trial".to_string(),
        "seed".to_string(),
        "status".to_string(),
        "iterations".to_string(),
        "final_cost".to_string(),
        "final_trace".to_string(),
        "cost_error".to_string(),
        "trace_error".to_string(),
        "swap_count".to_string(),
    ];
    for j in 0..ensemble_size {
        header.push(format!("state_err_{}", state_label(j)));
    }
    for j in 0..ensemble_size {
        header.push(format!("postdiag_err_{}", state_label(j)));
    }
    writer.write_record(&header)?;

    let scan_variable = outcome
        .config
        .scan
        .as_ref()
        .map(|s| s.variable.clone())
        .unwrap_or_default();
    for trial in &outcome.trials {
        let last = trial.record.last();
        let mut row = vec![
            scan_variable.clone(),
            trial.scan_value.map(fmt).unwrap_or_default(),
            trial.trial.to_string(),
            trial.seed.to_string(),
            trial.status_label().to_string(),
            trial.record.iterations.len().to_string(),
            fmt(last.cost),
            fmt(last.trace),
            fmt(trial.cost_error),
            fmt(trial.trace_error),
            trial.swap_iterations.len().to_string(),
        ];
        for e in &trial.per_state_errors {
            row.push(fmt(*e));
        }
        for e in &trial.post_diagonal_errors {
            row.push(fmt(*e));
        }
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// One row of a run summary, as read back for paired statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scan_value: Option<f64>,
    pub trial: usize,
    pub trace_error: f64,
}

/// Reads the columns of `summary.csv` that paired statistics need.
pub fn read_summary(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    let mut reader = csv::Reader::from_path(path.as_ref())
        .map_err(|e| HarnessError::Config(format!("{}: {e}", path.as_ref().display())))?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| HarnessError::Config(format!("summary lacks a {name:?} column")))
    };
    let scan_col = column("scan_value")?;
    let trial_col = column("trial")?;
    let error_col = column("trace_error")?;

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let scan_text = record.get(scan_col).unwrap_or_default();
        let scan_value = if scan_text.is_empty() {
            None
        } else {
            Some(scan_text.parse::<f64>().map_err(|e| {
                HarnessError::Config(format!("bad scan value {scan_text:?}: {e}"))
            })?)
        };
        let trial = record
            .get(trial_col)
            .unwrap_or_default()
            .parse::<usize>()
            .map_err(|e| HarnessError::Config(format!("bad trial index: {e}")))?;
        let trace_error = record
            .get(error_col)
            .unwrap_or_default()
            .parse::<f64>()
            .map_err(|e| HarnessError::Config(format!("bad trace error: {e}")))?;
        rows.push(SummaryRow {
            scan_value,
            trial,
            trace_error,
        });
    }
    if rows.is_empty() {
        return Err(HarnessError::Config("summary holds no data rows".into()));
    }
    Ok(rows)
}

/// Paired comparison at one scan point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatPoint {
    pub scan_value: Option<f64>,
    pub statistic: f64,
    pub p_raw: f64,
    pub p_adjusted: f64,
    /// Adjusted p at or below 0.05.
    pub significant: bool,
}

/// Bootstrap envelope of the mean paired difference across the scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandReport {
    pub scan_values: Vec<Option<f64>>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Full output of the paired-comparison command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatReport {
    /// Column the comparison was computed on.
    pub compared: String,
    pub confidence: f64,
    pub resamples: usize,
    pub seed: u64,
    pub points: Vec<StatPoint>,
    /// Present when both runs hold at least two trials.
    pub band: Option<BandReport>,
}

/// Significance threshold applied to adjusted p-values.
pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// Exact paired statistics between two run summaries.
///
/// Rows are paired by (scan value, trial); both summaries must cover the
/// same grid.  Differences are `first - second` on the trace error.
pub fn stat_report(
    first: &[SummaryRow],
    second: &[SummaryRow],
    confidence: f64,
    resamples: usize,
    seed: u64,
) -> Result<StatReport> {
    let grid = |rows: &[SummaryRow]| -> Vec<Option<f64>> {
        let mut values = Vec::new();
        for row in rows {
            if !values.contains(&row.scan_value) {
                values.push(row.scan_value);
            }
        }
        values
    };
    let scan_values = grid(first);
    if scan_values != grid(second) {
        return Err(HarnessError::Config(
            "the two summaries cover different scan grids".into(),
        ));
    }

    let collect = |rows: &[SummaryRow], scan: Option<f64>| -> Vec<(usize, f64)> {
        let mut picked: Vec<(usize, f64)> = rows
            .iter()
            .filter(|r| r.scan_value == scan)
            .map(|r| (r.trial, r.trace_error))
            .collect();
        picked.sort_by_key(|(t, _)| *t);
        picked
    };

    let mut per_point_diffs = Vec::with_capacity(scan_values.len());
    for &scan in &scan_values {
        let a = collect(first, scan);
        let b = collect(second, scan);
        if a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| x.0 != y.0) {
            return Err(HarnessError::Config(format!(
                "trial sets differ at scan value {scan:?}"
            )));
        }
        let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.1 - y.1).collect();
        per_point_diffs.push(diffs);
    }

    let mut statistics = Vec::with_capacity(scan_values.len());
    let mut raw = Vec::with_capacity(scan_values.len());
    for diffs in &per_point_diffs {
        let out = wilcoxon_signed_rank(diffs)?;
        statistics.push(out.statistic);
        raw.push(out.p_value);
    }
    let adjusted = benjamini_hochberg(&raw)?;

    let points: Vec<StatPoint> = scan_values
        .iter()
        .zip(statistics.iter().zip(raw.iter().zip(&adjusted)))
        .map(|(&scan_value, (&statistic, (&p_raw, &p_adjusted)))| StatPoint {
            scan_value,
            statistic,
            p_raw,
            p_adjusted,
            significant: p_adjusted <= SIGNIFICANCE_LEVEL,
        })
        .collect();

    let trials = per_point_diffs[0].len();
    let band = if trials >= 2 {
        let curves: Vec<Vec<f64>> = (0..trials)
            .map(|t| per_point_diffs.iter().map(|d| d[t]).collect())
            .collect();
        let band = bootstrap_band(&curves, confidence, resamples, seed)?;
        Some(BandReport {
            scan_values: scan_values.clone(),
            lower: band.lower,
            upper: band.upper,
        })
    } else {
        None
    };

    Ok(StatReport {
        compared: "trace_error".into(),
        confidence,
        resamples,
        seed,
        points,
        band,
    })
}

/// Serializes a report to pretty JSON at `path`.
pub fn write_stat_report(report: &StatReport, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, serde_json::to_string_pretty(report)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(scan: &[f64], trials: usize, f: impl Fn(usize, usize) -> f64) -> Vec<SummaryRow> {
        let mut out = Vec::new();
        for (s, &v) in scan.iter().enumerate() {
            for t in 0..trials {
                out.push(SummaryRow {
                    scan_value: Some(v),
                    trial: t,
                    trace_error: f(s, t),
                });
            }
        }
        out
    }

    #[test]
    fn labels_follow_the_alphabet() {
        assert_eq!(state_label(0), "A");
        assert_eq!(state_label(7), "H");
        assert_eq!(state_label(30), "S30");
    }

    #[test]
    fn consistently_larger_errors_are_flagged_at_every_point() {
        let scan = [0.0, 1.0, 2.0];
        let first = rows(&scan, 10, |s, t| 0.5 + 0.01 * (s + t) as f64);
        let second = rows(&scan, 10, |s, t| 0.1 + 0.001 * (s + t) as f64);
        let report = stat_report(&first, &second, 0.95, 200, 5).unwrap();
        assert_eq!(report.points.len(), 3);
        for point in &report.points {
            assert_eq!(point.statistic, 0.0);
            assert_eq!(point.p_raw, 0.001953125);
            assert!(point.significant);
            assert!(point.p_adjusted >= point.p_raw);
        }
        let band = report.band.unwrap();
        // All differences are positive, so the band stays above zero.
        assert!(band.lower.iter().all(|lo| *lo > 0.0));
    }

    #[test]
    fn mismatched_grids_and_trials_are_rejected() {
        let first = rows(&[0.0, 1.0], 4, |_, _| 0.2);
        let second = rows(&[0.0, 2.0], 4, |_, _| 0.1);
        assert!(stat_report(&first, &second, 0.95, 100, 1).is_err());
        let second = rows(&[0.0, 1.0], 3, |_, _| 0.1);
        assert!(stat_report(&first, &second, 0.95, 100, 1).is_err());
    }

    #[test]
    fn identical_summaries_make_the_test_undefined() {
        let first = rows(&[0.0], 6, |_, t| 0.1 * t as f64 + 0.2);
        let err = stat_report(&first, &first, 0.95, 100, 1).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
