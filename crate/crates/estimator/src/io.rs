//! Estimate, innovation and covariance artifacts.

use std::path::Path;

use nalgebra::DVector;

use crate::bundle::CovarianceJson;
use crate::error::{EstimatorError, Result};
use crate::kalman::KfOutput;

/// Header of the estimate file.
pub const ESTIMATE_HEADER: [&str; 6] = ["t_s", "s_m", "xi_est_m", "y_est_m", "psi_est_rad", "yf_est_m"];
/// Header of the innovation file.
pub const INNOVATION_HEADER: [&str; 6] = [
    "t_s",
    "s_m",
    "nu_acc_w_ms2",
    "nu_gyro_w_rads",
    "nu_acc_f_ms2",
    "nu_xi_m",
];

fn io_err(path: &Path, e: impl std::fmt::Display) -> EstimatorError {
    EstimatorError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn write_table(
    path: &Path,
    header: &[&str],
    t: &[f64],
    s: &[f64],
    rows: &[DVector<f64>],
    pick: impl Fn(&DVector<f64>) -> Vec<f64>,
) -> Result<()> {
    if t.len() != rows.len() || s.len() != rows.len() {
        return Err(EstimatorError::Config(format!(
            "time/arc-length grids ({}, {}) do not match {} rows",
            t.len(),
            s.len(),
            rows.len()
        )));
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for k in 0..rows.len() {
        let mut row = vec![t[k], s[k]];
        row.extend(pick(&rows[k]));
        w.write_record(row.iter().map(|v| format!("{v:e}")))
            .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Writes `t_s, s_m, xi_est_m, y_est_m, psi_est_rad, yf_est_m`.
pub fn write_estimate_csv(out: &KfOutput, t: &[f64], s: &[f64], path: &Path) -> Result<()> {
    write_table(path, &ESTIMATE_HEADER, t, s, &out.x_post, |x| vec![x[6], x[0], x[1], x[2]])
}

/// Writes the innovation sequence.
pub fn write_innovation_csv(out: &KfOutput, t: &[f64], s: &[f64], path: &Path) -> Result<()> {
    write_table(path, &INNOVATION_HEADER, t, s, &out.innovations, |nu| nu.iter().copied().collect())
}

/// Writes `(Q, R)` as row-major JSON.
pub fn write_covariance_json(cov: &CovarianceJson, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(cov).map_err(|e| io_err(path, e))?;
    std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

/// Reads `(Q, R)` written by [`write_covariance_json`].
pub fn read_covariance_json(path: &Path) -> Result<CovarianceJson> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| EstimatorError::Config(format!("{}: {e}", path.display())))
}
