//! Augmented-state Kalman filter estimating the lateral track alignment
//! from a wheelset accelerometer, a wheelset yaw-rate gyroscope and a frame
//! accelerometer.
//!
//! * [`bundle`] — continuous state-space form and the filter bundle.
//! * [`discretize`] — runtime-selectable discretizers (`taylor2`, `expm`).
//! * [`covariance`] — residual-based estimation and runtime-selectable
//!   covariance sources (`estimated`, `configured`, `hybrid`).
//! * [`kalman`] — the predict/update recursion.
//! * [`observability`] — numerical rank of the observability matrix.
//! * [`io`] — CSV/JSON artifacts.

pub mod bundle;
pub mod covariance;
pub mod discretize;
pub mod error;
pub mod io;
pub mod kalman;
pub mod observability;

pub use bundle::{build_continuous, default_p0, CovarianceJson, FilterBundle, DEFAULT_P0_DIAG, NX, NZ, XI};
pub use covariance::{
    covariance_registry, covariance_source, estimate_covariances, CovarianceEstimate,
    CovarianceInputs, CovarianceSource, CovarianceTuning, Covariances,
};
pub use discretize::{discretizer, discretizer_registry, Discretizer};
pub use error::{EstimatorError, Result};
pub use kalman::{kf_run, KfOutput};
pub use observability::{observability_matrix, observability_rank, RANK_TOLERANCE};

use alignest_dynamics::LinearLateralModel;

/// Builds `F_c`, `H_c` and the discrete `F` with the named discretizer;
/// `Q` and `R` are left at zero for the caller to fill in.
pub fn bundle_for_model(model: &LinearLateralModel, dt: f64, discretizer_name: &str) -> Result<FilterBundle> {
    let (fc, hc) = build_continuous(model)?;
    let f = discretizer(discretizer_name)?.discretize(&fc, dt)?;
    Ok(FilterBundle {
        h: hc.clone(),
        fc,
        hc,
        f,
        q: nalgebra::DMatrix::zeros(NX, NX),
        r: nalgebra::DMatrix::zeros(NZ, NZ),
        dt,
    })
}
