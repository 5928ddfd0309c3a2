//! Scoring drift signals against known change points.
//!
//! Change points are mapped to the batch that contains them. The first drift
//! signal at or after a change batch and before the next one is that
//! change's true positive; every other drift signal, including any before
//! the first change, is a false positive. Warnings are ignored.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::Result;
use crate::format::sig6_opt;
use crate::streams::ChangePointLog;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruePositive {
    /// Instance index of the change.
    pub change: usize,
    pub change_batch: usize,
    pub detection_batch: usize,
}

impl TruePositive {
    /// Batches from the change to its first detection.
    pub fn delay(&self) -> usize {
        self.detection_batch - self.change_batch
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionOutcome {
    pub true_positives: Vec<TruePositive>,
    pub false_positive_batches: Vec<usize>,
    /// Instance indices of changes with no detection.
    pub missed_changes: Vec<usize>,
    pub n_batches: usize,
}

impl DetectionOutcome {
    pub fn n_changes(&self) -> usize {
        self.true_positives.len() + self.missed_changes.len()
    }

    /// False positives over the batches that could not hold a true positive.
    pub fn fpr(&self) -> f64 {
        let base = self.n_batches.saturating_sub(self.n_changes());
        if base == 0 {
            return 0.0;
        }
        self.false_positive_batches.len() as f64 / base as f64
    }

    /// `None` when the stream has no changes.
    pub fn fnr(&self) -> Option<f64> {
        let c = self.n_changes();
        (c > 0).then(|| self.missed_changes.len() as f64 / c as f64)
    }

    /// Mean delay in batches; `None` without true positives.
    pub fn delay(&self) -> Option<f64> {
        if self.true_positives.is_empty() {
            return None;
        }
        let total: usize = self.true_positives.iter().map(TruePositive::delay).sum();
        Some(total as f64 / self.true_positives.len() as f64)
    }
}

pub fn match_detections(
    drift_batches: &[usize],
    changes: &ChangePointLog,
    batch_size: usize,
    stream_len: usize,
) -> DetectionOutcome {
    let n_batches = stream_len.div_ceil(batch_size);
    let change_batches: Vec<usize> = changes
        .positions()
        .iter()
        .map(|&c| c / batch_size)
        .collect();
    let mut signals: Vec<usize> = drift_batches.to_vec();
    signals.sort_unstable();
    signals.dedup();

    let mut outcome = DetectionOutcome {
        true_positives: Vec::new(),
        false_positive_batches: Vec::new(),
        missed_changes: Vec::new(),
        n_batches,
    };
    let first_change = change_batches.first().copied().unwrap_or(usize::MAX);
    outcome
        .false_positive_batches
        .extend(signals.iter().filter(|&&b| b < first_change));

    for (j, (&change, &start)) in changes.positions().iter().zip(&change_batches).enumerate() {
        let end = change_batches.get(j + 1).copied().unwrap_or(usize::MAX);
        let mut in_segment = signals.iter().copied().filter(|&b| b >= start && b < end);
        match in_segment.next() {
            Some(detection_batch) => outcome.true_positives.push(TruePositive {
                change,
                change_batch: start,
                detection_batch,
            }),
            None => outcome.missed_changes.push(change),
        }
        outcome.false_positive_batches.extend(in_segment);
    }
    outcome
}

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// `None` for an empty sample.
    pub fn of(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Some(Self {
            mean,
            std: var.sqrt(),
        })
    }
}

/// Aggregates over a campaign of runs. Absent entries are not applicable:
/// no changes (FNR), no true positive in any run (delay), or no classifier
/// (accuracy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSummary {
    pub runs: usize,
    pub fpr: MeanStd,
    pub fnr: Option<MeanStd>,
    pub delay: Option<MeanStd>,
    pub accuracy: Option<MeanStd>,
}

pub const SUMMARY_HEADER: &str =
    "fpr_mean,fpr_std,fnr_mean,fnr_std,delay_mean,delay_std,accuracy_mean,accuracy_std";

impl MetricSummary {
    /// Comma-separated values in [`SUMMARY_HEADER`] order.
    pub fn csv_fields(&self) -> String {
        let pair = |m: Option<MeanStd>| {
            format!(
                "{},{}",
                sig6_opt(m.map(|m| m.mean)),
                sig6_opt(m.map(|m| m.std))
            )
        };
        [
            pair(Some(self.fpr)),
            pair(self.fnr),
            pair(self.delay),
            pair(self.accuracy),
        ]
        .join(",")
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{SUMMARY_HEADER}")?;
        writeln!(out, "{}", self.csv_fields())?;
        Ok(())
    }
}

/// Panics on an empty campaign. `accuracies`, when given, holds one overall
/// accuracy per run.
pub fn summarize(outcomes: &[DetectionOutcome], accuracies: Option<&[f64]>) -> MetricSummary {
    assert!(!outcomes.is_empty(), "summary needs at least one run");
    let fpr: Vec<f64> = outcomes.iter().map(DetectionOutcome::fpr).collect();
    let fnr: Vec<f64> = outcomes.iter().filter_map(DetectionOutcome::fnr).collect();
    let delay: Vec<f64> = outcomes
        .iter()
        .filter_map(DetectionOutcome::delay)
        .collect();
    MetricSummary {
        runs: outcomes.len(),
        fpr: MeanStd::of(&fpr).expect("non-empty"),
        fnr: MeanStd::of(&fnr),
        delay: MeanStd::of(&delay),
        accuracy: accuracies.and_then(MeanStd::of),
    }
}

/// `0.0312 (± 0.0101)`, or `n/a`.
pub fn cell(m: Option<MeanStd>) -> String {
    match m {
        Some(m) => format!("{:.4} (± {:.4})", m.mean, m.std),
        None => "n/a".into(),
    }
}

/// Plain-text table with left-aligned first column and right-aligned rest.
pub fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let width = |c: usize| {
        rows.iter()
            .filter_map(|r| r.get(c))
            .chain(std::iter::once(&header[c]))
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(0)
    };
    let widths: Vec<usize> = (0..cols).map(width).collect();
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (s, &w))| {
                if i == 0 {
                    format!("{s:<w$}")
                } else {
                    format!("{s:>w$}")
                }
            })
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(header);
    line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>());
    for r in rows {
        line(r);
    }
    out
}
