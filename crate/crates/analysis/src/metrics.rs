//! Band-limited accuracy indices of an irregularity estimate.

use serde::{Deserialize, Serialize};

use crate::bands::WavelengthBand;
use crate::error::{AnalysisError, Result};
use crate::filter::bandpass;

/// Length removed at each end after band-passing (m).
pub const TRIM_LENGTH: f64 = 50.0;

/// Accuracy of an estimate in one band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandAccuracy {
    /// Band name.
    pub name: String,
    /// Band edges (m).
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// rms of the band-passed error (mm).
    #[serde(rename = "J_mm")]
    pub j_mm: f64,
    /// `J` relative to the rms of the band-passed reference; absent when the
    /// reference has no energy in the band.
    #[serde(rename = "J_rel")]
    pub j_rel: Option<f64>,
}

fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// Band-passes both signals, trims [`TRIM_LENGTH`] at each end and returns
/// `J = rms(est − real)` (in mm) and `J_rel = J / rms(real)`.
pub fn accuracy_indices(est: &[f64], real: &[f64], ds: f64, band: &WavelengthBand) -> Result<BandAccuracy> {
    if est.len() != real.len() {
        return Err(AnalysisError::Config(format!(
            "estimate and reference lengths differ ({} vs {})",
            est.len(),
            real.len()
        )));
    }
    let trim = (TRIM_LENGTH / ds).round() as usize;
    if est.len() <= 2 * trim {
        return Err(AnalysisError::Config(format!(
            "signal of {} samples is shorter than the two {TRIM_LENGTH} m trims",
            est.len()
        )));
    }
    let e = bandpass(est, ds, band)?;
    let r = bandpass(real, ds, band)?;
    let range = trim..est.len() - trim;
    let diff: Vec<f64> = e[range.clone()].iter().zip(&r[range.clone()]).map(|(a, b)| a - b).collect();
    let j = rms(&diff);
    let ref_rms = rms(&r[range]);
    Ok(BandAccuracy {
        name: band.name.clone(),
        lambda_min: band.lambda_min,
        lambda_max: band.lambda_max,
        j_mm: j * 1e3,
        j_rel: (ref_rms > 0.0).then(|| j / ref_rms),
    })
}

/// Accuracy report over several bands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub run_id: String,
    pub bands: Vec<BandAccuracy>,
}

impl AccuracyReport {
    /// Evaluates every band.
    pub fn compute(run_id: &str, est: &[f64], real: &[f64], ds: f64, bands: &[WavelengthBand]) -> Result<Self> {
        Ok(Self {
            run_id: run_id.to_string(),
            bands: bands
                .iter()
                .map(|b| accuracy_indices(est, real, ds, b))
                .collect::<Result<_>>()?,
        })
    }

    /// Looks up a band by name.
    pub fn band(&self, name: &str) -> Option<&BandAccuracy> {
        self.bands.iter().find(|b| b.name == name)
    }
}
