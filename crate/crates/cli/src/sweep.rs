//! Robustness sweeps: a base scenario plus named override variants, run in
//! parallel and summarized as one table (rows = variants, columns = bands).

use std::path::Path;

use alignest_analysis::{standard_bands, BandAccuracy};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ResolvedSweep;
use crate::error::{CliError, Result};
use crate::scenario::{run_scenario, write_json};

/// One row of the comparative table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub variant: String,
    /// Band accuracies; empty when the variant failed.
    pub bands: Vec<BandAccuracy>,
    /// `"J / J_rel"` cells keyed by band name, in band order.
    pub cells: Vec<(String, String)>,
    pub error: Option<String>,
    /// Exit status class of the failure, if any.
    #[serde(skip)]
    pub exit_code: Option<i32>,
}

/// The comparative table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub sweep_id: String,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Row of a variant.
    pub fn row(&self, variant: &str) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.variant == variant)
    }

    /// Whole-range J (mm) of a variant, if it ran.
    pub fn whole_j(&self, variant: &str) -> Option<f64> {
        self.row(variant)?.bands.iter().find(|b| b.name == "whole").map(|b| b.j_mm)
    }
}

/// Formats one `"J / J_rel"` cell (J in mm).
pub fn format_cell(b: &BandAccuracy) -> String {
    match b.j_rel {
        Some(r) => format!("{:.3} / {:.2}", b.j_mm, r),
        None => format!("{:.3} / n/a", b.j_mm),
    }
}

/// Runs every scenario of the sweep in parallel, each into its own
/// subdirectory of `out`, and writes `<sweep_id>.json` and `<sweep_id>.csv`.
/// Failed variants are recorded in the table; the first failure is
/// returned after the table has been written.
pub fn run_sweep(sweep: &ResolvedSweep, out: &Path) -> Result<SweepReport> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let columns: Vec<String> = standard_bands().into_iter().map(|b| b.name).collect();
    let rows: Vec<SweepRow> = sweep
        .scenarios
        .par_iter()
        .map(|cfg| match run_scenario(cfg, &out.join(&cfg.run_id)) {
            Ok(run) => SweepRow {
                variant: cfg.run_id.clone(),
                cells: run.report.bands.iter().map(|b| (b.name.clone(), format_cell(b))).collect(),
                bands: run.report.bands,
                error: None,
                exit_code: None,
            },
            Err(e) => {
                log::error!("[{}] {e}", cfg.run_id);
                SweepRow {
                    variant: cfg.run_id.clone(),
                    bands: Vec::new(),
                    cells: columns.iter().map(|c| (c.clone(), "failed".to_string())).collect(),
                    error: Some(e.to_string()),
                    exit_code: Some(e.exit_code()),
                }
            }
        })
        .collect();
    let report = SweepReport {
        sweep_id: sweep.sweep_id.clone(),
        columns,
        rows,
    };
    write_json(&out.join(format!("{}.json", report.sweep_id)), &report)?;
    write_table_csv(&report, &out.join(format!("{}.csv", report.sweep_id)))?;
    if let Some(row) = report.rows.iter().find(|r| r.error.is_some()) {
        let msg = format!("variant '{}' failed: {}", row.variant, row.error.as_deref().unwrap_or(""));
        return Err(match row.exit_code {
            Some(crate::error::EXIT_NUMERIC) => CliError::Numeric(msg),
            Some(crate::error::EXIT_IO) => CliError::io(out, msg),
            _ => CliError::Config(msg),
        });
    }
    Ok(report)
}

fn write_table_csv(report: &SweepReport, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
    let mut header = vec!["variant".to_string()];
    header.extend(report.columns.iter().cloned());
    header.push("error".into());
    w.write_record(&header).map_err(|e| CliError::io(path, e))?;
    for row in &report.rows {
        let mut rec = vec![row.variant.clone()];
        rec.extend(row.cells.iter().map(|(_, c)| c.clone()));
        rec.push(row.error.clone().unwrap_or_default());
        w.write_record(&rec).map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
