//! CSV exports of truth runs.

use std::path::Path;

use crate::error::{Result, TruthError};
use crate::model::{NSTATE, STATE_NAMES};
use crate::simulate::TruthRun;

/// Header of the sensor files.
pub const SENSOR_HEADER: [&str; 5] = ["t_s", "s_m", "acc_w_ms2", "gyro_w_rads", "acc_f_ms2"];

fn io_err(path: &Path, e: impl std::fmt::Display) -> TruthError {
    TruthError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn write_rows<'a>(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>> + 'a,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:e}")))
            .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn write_channels(run: &TruthRun, channels: &[[f64; 3]], path: &Path) -> Result<()> {
    write_rows(
        path,
        &SENSOR_HEADER,
        (0..run.len()).map(|k| vec![run.t[k], run.s[k], channels[k][0], channels[k][1], channels[k][2]]),
    )
}

/// Writes `<stem>.csv` (noisy) and `<stem>_clean.csv` into `dir`.
pub fn write_sensor_csvs(run: &TruthRun, dir: &Path, stem: &str) -> Result<()> {
    write_channels(run, &run.noisy, &dir.join(format!("{stem}.csv")))?;
    write_channels(run, &run.clean, &dir.join(format!("{stem}_clean.csv")))
}

/// Writes the full truth state history, one column per DOF and derivative,
/// plus the alignment under the leading wheelset.
pub fn write_state_csv(run: &TruthRun, path: &Path) -> Result<()> {
    let mut header = vec!["t_s", "s_m"];
    header.extend_from_slice(&STATE_NAMES);
    header.push("xi_a_m");
    write_rows(
        path,
        &header,
        (0..run.len()).map(|k| {
            let mut row = Vec::with_capacity(NSTATE + 3);
            row.push(run.t[k]);
            row.push(run.s[k]);
            row.extend(run.states[k].iter().copied());
            row.push(run.xi[k]);
            row
        }),
    )
}
