//! Process and measurement covariances: residual-based estimation from a
//! truth run, configured diagonals, and a hybrid of the two, selectable by
//! name through [`covariance_registry`].

use alignest_registry::Registry;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bundle::{NX, NZ, XI};
use crate::error::{EstimatorError, Result};

/// Relative diagonal loading applied to residual-based covariances.
pub const RELATIVE_LOADING: f64 = 1e-12;
/// Absolute loading used when a residual covariance is identically zero.
pub const ABSOLUTE_LOADING: f64 = 1e-12;
/// Below this many residuals the estimate is flagged as unreliable.
pub const MIN_RELIABLE_SAMPLES: usize = 100;

/// Residual-based covariance estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceEstimate {
    /// Loaded process covariance.
    pub q: DMatrix<f64>,
    /// Loaded measurement covariance.
    pub r: DMatrix<f64>,
    /// Symmetrized sample covariance of the state residuals, before loading.
    pub q_raw: DMatrix<f64>,
    /// Symmetrized sample covariance of the measurement residuals, before
    /// loading.
    pub r_raw: DMatrix<f64>,
    /// Set when fewer than [`MIN_RELIABLE_SAMPLES`] residuals were used.
    pub warning: Option<String>,
}

fn sample_covariance(residuals: impl Iterator<Item = DVector<f64>>, n: usize) -> DMatrix<f64> {
    let mut acc = DMatrix::zeros(n, n);
    let mut count = 0usize;
    for e in residuals {
        acc.ger(1.0, &e, &e, 1.0);
        count += 1;
    }
    let mut c = acc / count.max(1) as f64;
    let sym = (&c + c.transpose()) * 0.5;
    c.copy_from(&sym);
    c
}

fn load(raw: &DMatrix<f64>) -> DMatrix<f64> {
    let max_diag = raw.diagonal().max();
    let eps = if max_diag > 0.0 {
        RELATIVE_LOADING * max_diag
    } else {
        ABSOLUTE_LOADING
    };
    raw + DMatrix::identity(raw.nrows(), raw.ncols()) * eps
}

fn check_psd(name: &str, m: &DMatrix<f64>) -> Result<()> {
    if !m.iter().all(|v| v.is_finite()) {
        return Err(EstimatorError::numeric(format!("{name} has non-finite entries")));
    }
    let eig = m.clone().symmetric_eigenvalues();
    let min = eig.min();
    if min < -1e-10 * eig.amax().max(1.0) {
        return Err(EstimatorError::numeric(format!(
            "{name} is not positive semidefinite after loading (min eigenvalue {min:e})"
        )));
    }
    Ok(())
}

/// Sample covariances of the one-step state residuals
/// `e_x = x_k − F·x_{k−1}` and the measurement residuals `e_z = z_k − H·x_k`,
/// symmetrized and diagonally loaded.
pub fn estimate_covariances(
    states: &[DVector<f64>],
    meas: &[DVector<f64>],
    f: &DMatrix<f64>,
    h: &DMatrix<f64>,
) -> Result<CovarianceEstimate> {
    if states.len() < 2 || states.len() != meas.len() {
        return Err(EstimatorError::Config(format!(
            "need at least two aligned samples, got {} states and {} measurements",
            states.len(),
            meas.len()
        )));
    }
    let nx = f.nrows();
    let nz = h.nrows();
    if states.iter().any(|x| x.len() != nx) || meas.iter().any(|z| z.len() != nz) {
        return Err(EstimatorError::Config("state/measurement dimension mismatch".into()));
    }
    let q_raw = sample_covariance(states.windows(2).map(|w| &w[1] - f * &w[0]), nx);
    let r_raw = sample_covariance(states.iter().zip(meas).map(|(x, z)| z - h * x), nz);
    let q = load(&q_raw);
    let r = load(&r_raw);
    check_psd("Q", &q)?;
    check_psd("R", &r)?;
    let n = states.len() - 1;
    let warning = (n < MIN_RELIABLE_SAMPLES)
        .then(|| format!("covariance estimate from only {n} residuals is unreliable"));
    Ok(CovarianceEstimate {
        q,
        r,
        q_raw,
        r_raw,
        warning,
    })
}

/// Diagonal tuning used by the configured and hybrid sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CovarianceTuning {
    /// Process variance of the three positions (m², rad²).
    pub q_pos: f64,
    /// Process variance of the three velocities ((m/s)², (rad/s)²).
    pub q_vel: f64,
    /// Process variance of the irregularity random walk (m²).
    pub q_xi: f64,
}

impl Default for CovarianceTuning {
    fn default() -> Self {
        Self {
            q_pos: 1e-16,
            q_vel: 1e-8,
            q_xi: 1e-8,
        }
    }
}

impl CovarianceTuning {
    /// Checks non-negativity.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("q_pos", self.q_pos), ("q_vel", self.q_vel), ("q_xi", self.q_xi)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(EstimatorError::Config(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    /// Diagonal process covariance.
    pub fn q(&self) -> DMatrix<f64> {
        let d = [
            self.q_pos, self.q_pos, self.q_pos, self.q_vel, self.q_vel, self.q_vel, self.q_xi,
        ];
        DMatrix::from_diagonal(&DVector::from_row_slice(&d))
    }
}

/// Data available to a covariance source.
#[derive(Debug, Clone, Copy)]
pub struct CovarianceInputs<'a> {
    /// Reference augmented states (from a truth run).
    pub truth_states: &'a [DVector<f64>],
    /// Measurements aligned with the states (noisy sensors, zero virtual).
    pub truth_meas: &'a [DVector<f64>],
    pub f: &'a DMatrix<f64>,
    pub h: &'a DMatrix<f64>,
    /// Sensor standard deviations `[acc_w, gyro, acc_f]`.
    pub sensor_sigmas: [f64; 3],
    /// Standard deviation of the virtual irregularity measurement (m).
    pub sigma_xi_virtual: f64,
}

/// Resolved covariances and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariances {
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
    pub warning: Option<String>,
}

/// A strategy producing `(Q, R)`.
pub trait CovarianceSource: Send + Sync {
    /// Registered name.
    fn name(&self) -> &'static str;
    /// Computes the covariances.
    fn covariances(&self, inputs: &CovarianceInputs<'_>) -> Result<Covariances>;
}

/// Registry type: factories receive the diagonal tuning.
pub type CovarianceRegistry = Registry<dyn CovarianceSource, CovarianceTuning>;

/// Built-in sources: `estimated`, `configured`, `hybrid`.
pub fn covariance_registry() -> CovarianceRegistry {
    CovarianceRegistry::new("covariance source")
        .with("estimated", |_| Ok(Box::new(Estimated) as Box<dyn CovarianceSource>))
        .with("configured", |t| {
            t.validate().map_err(|e| e.to_string())?;
            Ok(Box::new(Configured(t.clone())) as Box<dyn CovarianceSource>)
        })
        .with("hybrid", |t| {
            t.validate().map_err(|e| e.to_string())?;
            Ok(Box::new(Hybrid(t.clone())) as Box<dyn CovarianceSource>)
        })
}

/// Looks up a covariance source by name.
pub fn covariance_source(name: &str, tuning: &CovarianceTuning) -> Result<Box<dyn CovarianceSource>> {
    covariance_registry()
        .create(name, tuning)
        .map_err(|e| EstimatorError::Config(e.to_string()))
}

fn configured_r(inputs: &CovarianceInputs<'_>) -> DMatrix<f64> {
    let [a, g, f] = inputs.sensor_sigmas;
    let v = inputs.sigma_xi_virtual;
    DMatrix::from_diagonal(&DVector::from_row_slice(&[a * a, g * g, f * f, v * v]))
}

/// Residual-based estimation from the truth run.
#[derive(Debug, Clone, Copy)]
pub struct Estimated;

impl CovarianceSource for Estimated {
    fn name(&self) -> &'static str {
        "estimated"
    }

    fn covariances(&self, inputs: &CovarianceInputs<'_>) -> Result<Covariances> {
        let est = estimate_covariances(inputs.truth_states, inputs.truth_meas, inputs.f, inputs.h)?;
        Ok(Covariances {
            q: est.q,
            r: est.r,
            warning: est.warning,
        })
    }
}

/// Diagonal covariances from the tuning and the sensor noise levels.
#[derive(Debug, Clone)]
pub struct Configured(pub CovarianceTuning);

impl CovarianceSource for Configured {
    fn name(&self) -> &'static str {
        "configured"
    }

    fn covariances(&self, inputs: &CovarianceInputs<'_>) -> Result<Covariances> {
        if inputs.f.nrows() != NX || inputs.h.nrows() != NZ {
            return Err(EstimatorError::Config(
                "configured covariances require the 7-state / 4-measurement layout".into(),
            ));
        }
        Ok(Covariances {
            q: self.0.q(),
            r: configured_r(inputs),
            warning: None,
        })
    }
}

/// Residual-based covariances with the irregularity entries (process
/// variance of `ξ`, virtual-measurement variance) replaced by configured
/// values and decoupled from the other entries.
#[derive(Debug, Clone)]
pub struct Hybrid(pub CovarianceTuning);

impl CovarianceSource for Hybrid {
    fn name(&self) -> &'static str {
        "hybrid"
    }

    fn covariances(&self, inputs: &CovarianceInputs<'_>) -> Result<Covariances> {
        if inputs.f.nrows() != NX || inputs.h.nrows() != NZ {
            return Err(EstimatorError::Config(
                "hybrid covariances require the 7-state / 4-measurement layout".into(),
            ));
        }
        let mut c = Estimated.covariances(inputs)?;
        let last_z = c.r.nrows() - 1;
        c.q.row_mut(XI).fill(0.0);
        c.q.column_mut(XI).fill(0.0);
        c.q[(XI, XI)] = self.0.q_xi;
        c.r.row_mut(last_z).fill(0.0);
        c.r.column_mut(last_z).fill(0.0);
        c.r[(last_z, last_z)] = inputs.sigma_xi_virtual.powi(2);
        Ok(c)
    }
}
