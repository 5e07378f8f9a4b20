//! Runtime-selectable discretizers of the continuous transition matrix.

use alignest_registry::Registry;
use nalgebra::DMatrix;

use crate::error::{EstimatorError, Result};

/// Maps `F_c` and a step `dt` to a discrete transition matrix.
pub trait Discretizer: Send + Sync {
    /// Registered name.
    fn name(&self) -> &'static str;
    /// Discrete transition matrix for step `dt`.
    fn discretize(&self, fc: &DMatrix<f64>, dt: f64) -> Result<DMatrix<f64>>;
}

/// Registry of parameterless discretizers.
pub type DiscretizerRegistry = Registry<dyn Discretizer>;

/// Built-in discretizers: `taylor2` and `expm`.
pub fn discretizer_registry() -> DiscretizerRegistry {
    DiscretizerRegistry::new("discretizer")
        .with("taylor2", |_| Ok(Box::new(Taylor2) as Box<dyn Discretizer>))
        .with("expm", |_| Ok(Box::new(Expm) as Box<dyn Discretizer>))
}

/// Looks up a discretizer by name.
pub fn discretizer(name: &str) -> Result<Box<dyn Discretizer>> {
    discretizer_registry()
        .get(name)
        .map_err(|e| EstimatorError::Config(e.to_string()))
}

fn check(fc: &DMatrix<f64>, dt: f64) -> Result<()> {
    if !fc.is_square() {
        return Err(EstimatorError::Config(format!("F_c must be square, got {:?}", fc.shape())));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(EstimatorError::Config(format!("time step must be positive, got {dt}")));
    }
    Ok(())
}

/// Mixed-order Taylor expansion: `F = I + dt·F_c + (dt²/2)·S·F_c²`, where
/// `S` selects the position rows (the first `⌊n/2⌋` states of a
/// `[q, q̇, (ξ)]` layout). Velocity rows and any augmented rows stay first
/// order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Taylor2;

impl Discretizer for Taylor2 {
    fn name(&self) -> &'static str {
        "taylor2"
    }

    fn discretize(&self, fc: &DMatrix<f64>, dt: f64) -> Result<DMatrix<f64>> {
        check(fc, dt)?;
        let n = fc.nrows();
        let mut f = DMatrix::identity(n, n) + fc * dt;
        let fc2 = fc * fc;
        for i in 0..n / 2 {
            for j in 0..n {
                f[(i, j)] += 0.5 * dt * dt * fc2[(i, j)];
            }
        }
        Ok(f)
    }
}

/// Exact zero-order-hold transition `expm(F_c·dt)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Expm;

impl Discretizer for Expm {
    fn name(&self) -> &'static str {
        "expm"
    }

    fn discretize(&self, fc: &DMatrix<f64>, dt: f64) -> Result<DMatrix<f64>> {
        check(fc, dt)?;
        let f = (fc * dt).exp();
        if !f.iter().all(|v| v.is_finite()) {
            return Err(EstimatorError::numeric("matrix exponential is not finite"));
        }
        Ok(f)
    }
}
