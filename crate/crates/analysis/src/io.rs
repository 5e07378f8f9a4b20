//! Report and spectrum artifacts.

use std::path::Path;

use crate::error::{AnalysisError, Result};
use crate::metrics::AccuracyReport;
use crate::spectrum::Spectrum;

fn io_err(path: &Path, e: impl std::fmt::Display) -> AnalysisError {
    AnalysisError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Writes the accuracy report as pretty JSON.
pub fn write_report_json(report: &AccuracyReport, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(report).map_err(|e| io_err(path, e))?;
    std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

/// Writes `freq_cyc_per_m, magnitude_m`.
pub fn write_spectrum_csv(spec: &Spectrum, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(["freq_cyc_per_m", "magnitude_m"]).map_err(|e| io_err(path, e))?;
    for (f, m) in spec.freq.iter().zip(&spec.magnitude) {
        w.write_record([format!("{f:e}"), format!("{m:e}")])
            .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}
