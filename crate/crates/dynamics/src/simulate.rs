//! Fixed-step RK4 time integration of the simplified model.

use nalgebra::{Vector3, Vector6};

use crate::error::{DynamicsError, Result};
use crate::model::LinearLateralModel;

/// Time history of the simplified model.
#[derive(Debug, Clone, PartialEq)]
pub struct SmTrajectory {
    /// Time step (s).
    pub dt: f64,
    /// States `[y, ψ, y_f, ẏ, ψ̇, ẏ_f]` at `t_k = k·dt`, `k = 0..=n`.
    pub states: Vec<Vector6<f64>>,
    /// Accelerations `[ÿ, ψ̈, ÿ_f]` at the same instants.
    pub accelerations: Vec<Vector3<f64>>,
    /// Irregularity input at the same instants.
    pub xi: Vec<f64>,
}

/// Divergence guard: any displacement beyond this (m or rad) aborts.
pub const DIVERGENCE_LIMIT: f64 = 1.0;

/// Integrates the model from rest over `n_steps` steps of `dt`, with the
/// irregularity under the wheelset given as a function of time.
pub fn simulate_sm(
    model: &LinearLateralModel,
    dt: f64,
    n_steps: usize,
    xi_at: impl Fn(f64) -> f64,
) -> Result<SmTrajectory> {
    if !(dt > 0.0) {
        return Err(DynamicsError::Config(format!("time step must be positive, got {dt}")));
    }
    let a = model.companion();
    let b = model.input_column();
    let f = |t: f64, x: &Vector6<f64>| a * x + b * xi_at(t);

    let mut x = Vector6::zeros();
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut accelerations = Vec::with_capacity(n_steps + 1);
    let mut xi = Vec::with_capacity(n_steps + 1);
    for k in 0..=n_steps {
        let t = k as f64 * dt;
        let dx = f(t, &x);
        states.push(x);
        accelerations.push(dx.fixed_rows::<3>(3).into_owned());
        xi.push(xi_at(t));
        if k == n_steps {
            break;
        }
        let k1 = dx;
        let k2 = f(t + 0.5 * dt, &(x + 0.5 * dt * k1));
        let k3 = f(t + 0.5 * dt, &(x + 0.5 * dt * k2));
        let k4 = f(t + dt, &(x + dt * k3));
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if let Some(i) = (0..3).find(|&i| !(x[i].abs() <= DIVERGENCE_LIMIT)) {
            return Err(DynamicsError::Numeric(format!(
                "simplified model diverged at step {} (coordinate {} = {:e})",
                k + 1,
                ["y", "psi", "y_f"][i],
                x[i]
            )));
        }
    }
    Ok(SmTrajectory {
        dt,
        states,
        accelerations,
        xi,
    })
}
