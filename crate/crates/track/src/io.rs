//! Profile CSV import/export (`s_m,xi_g_m,xi_a_m,xi_cl_m,xi_vp_m`).

use std::path::Path;

use crate::error::{Result, TrackError};
use crate::profile::TrackIrregularityProfile;

/// Column header of the profile file format.
pub const PROFILE_HEADER: [&str; 5] = ["s_m", "xi_g_m", "xi_a_m", "xi_cl_m", "xi_vp_m"];

fn io_err(path: &Path, e: impl std::fmt::Display) -> TrackError {
    TrackError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Writes a profile as CSV, one row per grid point.
pub fn write_profile_csv(profile: &TrackIrregularityProfile, path: &Path) -> Result<()> {
    profile.validate()?;
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(PROFILE_HEADER).map_err(|e| io_err(path, e))?;
    for k in 0..profile.len() {
        let row = [
            profile.s_grid[k],
            profile.xi_g[k],
            profile.xi_a[k],
            profile.xi_cl[k],
            profile.xi_vp[k],
        ];
        w.write_record(row.iter().map(|v| format!("{v:e}")))
            .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Reads a profile CSV written by [`write_profile_csv`] (or any file with
/// the same header).
pub fn read_profile_csv(path: &Path) -> Result<TrackIrregularityProfile> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let header = r.headers().map_err(|e| io_err(path, e))?.clone();
    let got: Vec<&str> = header.iter().collect();
    if got != PROFILE_HEADER {
        return Err(TrackError::Structural(format!(
            "{}: expected header {:?}, found {:?}",
            path.display(),
            PROFILE_HEADER,
            got
        )));
    }
    let mut cols: [Vec<f64>; 5] = Default::default();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        if rec.len() != 5 {
            return Err(TrackError::Structural(format!(
                "{}: row {} has {} fields",
                path.display(),
                line + 2,
                rec.len()
            )));
        }
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                TrackError::Structural(format!(
                    "{}: row {} column {}: '{}' is not a number",
                    path.display(),
                    line + 2,
                    PROFILE_HEADER[c],
                    field
                ))
            })?;
            cols[c].push(v);
        }
    }
    let [s_grid, xi_g, xi_a, xi_cl, xi_vp] = cols;
    let p = TrackIrregularityProfile {
        s_grid,
        xi_g,
        xi_a,
        xi_cl,
        xi_vp,
    };
    p.validate()?;
    Ok(p)
}
