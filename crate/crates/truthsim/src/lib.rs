//! Reference ("truth") simulator: a two-wheelset bogie with frame yaw and a
//! lumped car-body share, integrated in time to produce ground-truth states
//! and synthetic inertial sensor records.
//!
//! The model is deliberately richer than the simplified estimator model:
//! two wheelsets sample the irregularity at separate positions, the frame
//! yaws, a secondary suspension carries the car body, and the lateral
//! accelerometers are contaminated by cross-level (roll) irregularity.
//!
//! * [`params`] — truth parameters with surrogate defaults.
//! * [`model`] — matrix assembly and modal analysis.
//! * [`simulate`] — RK4 integration and sensor synthesis.
//! * [`noise`] — noise specification, injection and autoscaling.
//! * [`io`] — CSV exports.

pub mod error;
pub mod io;
pub mod model;
pub mod noise;
pub mod params;
pub mod simulate;

pub use error::{Result, TruthError};
pub use model::{assemble_truth, truth_modal_analysis, TruthModel, NDOF, NSTATE, STATE_NAMES};
pub use noise::{sensor_noise_autoscale, NoiseSpec, AUTOSCALE_FRACTION, DEFAULT_SIGMA_XI_VIRTUAL};
pub use params::TruthParams;
pub use simulate::{simulate_truth, TruthOptions, TruthRun};
