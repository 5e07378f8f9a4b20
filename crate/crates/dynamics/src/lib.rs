//! Simplified lateral dynamics of one conical wheelset and a suspended
//! frame with Kalker linear creep.
//!
//! * [`params`] — the equivalent parameter vector and the identification
//!   subset.
//! * [`model`] — assembly of mass, suspension and contact matrices and the
//!   irregularity input stiffness.
//! * [`modal`] — eigen-analysis (frequencies, damping, wavelengths).
//! * [`simulate`] — RK4 time integration driven by an irregularity signal.

pub mod error;
pub mod modal;
pub mod model;
pub mod params;
pub mod simulate;

pub use error::{DynamicsError, Result};
pub use modal::{modal_analysis, Mode, ModalSummary};
pub use model::{
    assemble_sm, assemble_sm_with, irregularity_force, irregularity_stiffness, sm_accelerations,
    KdMassForm, LinearLateralModel, SmOptions,
};
pub use params::{OptParam, SmParams, GRAVITY};
pub use simulate::{simulate_sm, SmTrajectory};

/// Kinematic (Klingel) hunting wavelength `2π·√(r0·l/α)` of a free conical
/// wheelset (m).
pub fn klingel_wavelength(p: &SmParams) -> f64 {
    2.0 * std::f64::consts::PI * (p.r0 * p.l / p.alpha).sqrt()
}
