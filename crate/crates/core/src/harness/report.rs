//! Result tables and report emission.

use std::fmt::Write as _;
use std::path::Path;

use crate::features::FeatureScheme;

use super::config::{Learner, ReportFormat};
use super::HarnessError;

/// One (target, scheme, learner) result.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub target: String,
    pub scheme: FeatureScheme,
    pub learner: Learner,
    pub accuracy: f64,
    pub majority_baseline: f64,
    pub n_test: usize,
}

/// All rows of one experiment run, in deterministic order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultsTable {
    pub rows: Vec<ResultRow>,
}

fn percent(value: f64) -> String {
    format!("{:.2}%", value * 100.0)
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

/// Renders the table as CSV (accuracies as percentages with two decimals).
pub fn render_report(table: &ResultsTable, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str("target,scheme,learner,accuracy,majority_baseline,n_test\n");
            for row in &table.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    csv_field(&row.target),
                    row.scheme,
                    row.learner,
                    percent(row.accuracy),
                    percent(row.majority_baseline),
                    row.n_test
                );
            }
        }
        ReportFormat::Md => {
            out.push_str("| Target | Scheme | Learner | Accuracy | Majority baseline | N test |\n");
            out.push_str("| --- | --- | --- | --- | --- | --- |\n");
            for row in &table.rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} |",
                    row.target,
                    row.scheme,
                    row.learner,
                    percent(row.accuracy),
                    percent(row.majority_baseline),
                    row.n_test
                );
            }
        }
    }
    out
}

/// Writes the rendered table to a file.
pub fn emit_report(
    table: &ResultsTable,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<(), HarnessError> {
    let path = path.as_ref();
    std::fs::write(path, render_report(table, format)).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes a k-sweep as a two-column CSV, rows in input order.
pub fn emit_k_sweep(
    results: &[(usize, f64)],
    path: impl AsRef<Path>,
) -> Result<(), HarnessError> {
    let path = path.as_ref();
    let mut out = String::from("k,accuracy\n");
    for (k, accuracy) in results {
        let _ = writeln!(out, "{k},{accuracy}");
    }
    std::fs::write(path, out).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}
