//! Eigen-analysis of the homogeneous simplified model.

use nalgebra::Complex;
use serde::Serialize;

use crate::error::{DynamicsError, Result};
use crate::model::LinearLateralModel;

/// Eigenvalues with `|imag|` below this (rad/s) are non-oscillatory.
pub const OSCILLATORY_TOL: f64 = 1e-6;

/// One oscillatory mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mode {
    pub freq_hz: f64,
    pub damping_ratio: f64,
    pub wavelength_m: f64,
}

/// Eigenvalues and oscillatory modes of a model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalSummary {
    /// All eigenvalues of the first-order companion matrix (1/s).
    pub eigenvalues: Vec<Complex<f64>>,
    /// Oscillatory modes (one per conjugate pair), sorted by frequency.
    pub modes: Vec<Mode>,
}

impl ModalSummary {
    /// The oscillatory mode with the smallest damping ratio.
    pub fn least_damped(&self) -> Option<&Mode> {
        self.modes
            .iter()
            .min_by(|a, b| a.damping_ratio.total_cmp(&b.damping_ratio))
    }

    /// Largest real part over all eigenvalues (stability margin).
    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Builds a mode from a continuous-time eigenvalue with positive imaginary
/// part, at forward speed `v`.
pub fn mode_from_eigenvalue(lambda: Complex<f64>, v: f64) -> Mode {
    let omega_n = lambda.norm();
    let freq_hz = lambda.im / (2.0 * std::f64::consts::PI);
    Mode {
        freq_hz,
        damping_ratio: if omega_n > 0.0 { -lambda.re / omega_n } else { 0.0 },
        wavelength_m: v / freq_hz,
    }
}

/// Computes eigenvalues of the companion matrix and the oscillatory modes.
pub fn modal_analysis(model: &LinearLateralModel) -> Result<ModalSummary> {
    let a = model.companion();
    if !a.iter().all(|x| x.is_finite()) {
        return Err(DynamicsError::Numeric("companion matrix has non-finite entries".into()));
    }
    let eigenvalues: Vec<Complex<f64>> = a.complex_eigenvalues().iter().copied().collect();
    if eigenvalues.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
        return Err(DynamicsError::Numeric("eigen-decomposition did not converge".into()));
    }
    Ok(summarize(eigenvalues, model.v))
}

/// Builds a summary from arbitrary eigenvalues (shared with other models).
pub fn summarize(eigenvalues: Vec<Complex<f64>>, v: f64) -> ModalSummary {
    let mut modes: Vec<Mode> = eigenvalues
        .iter()
        .filter(|e| e.im > OSCILLATORY_TOL)
        .map(|&e| mode_from_eigenvalue(e, v))
        .collect();
    modes.sort_by(|a, b| a.freq_hz.total_cmp(&b.freq_hz));
    ModalSummary { eigenvalues, modes }
}
