//! Continuous state-space form of the augmented model and the filter
//! bundle.
//!
//! Augmented state `x = [y, ψ, y_f, ẏ, ψ̇, ẏ_f, ξ]`, measurements
//! `z = [ÿ, ψ̇, ÿ_f, ξ_virtual]`. The irregularity is modelled as a constant
//! (`ξ̇ = 0`) driven by process noise; the virtual measurement of `ξ` is
//! always zero and prevents drift of the unobservable common offset.

use alignest_dynamics::LinearLateralModel;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{EstimatorError, Result};

/// Dimension of the augmented state.
pub const NX: usize = 7;
/// Dimension of the measurement vector.
pub const NZ: usize = 4;
/// Index of the irregularity in the augmented state.
pub const XI: usize = 6;

/// Default initial covariance diagonal (m², rad², m², (m/s)², (rad/s)²,
/// (m/s)², m²).
pub const DEFAULT_P0_DIAG: [f64; NX] = [1e-4, 1e-6, 1e-4, 1e-4, 1e-6, 1e-4, 2.5e-5];

/// Default initial covariance.
pub fn default_p0() -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_row_slice(&DEFAULT_P0_DIAG))
}

/// Builds `(F_c, H_c)` for the augmented state from the simplified model.
pub fn build_continuous(model: &LinearLateralModel) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let m_inv = model.m_inv();
    if !m_inv.iter().all(|v| v.is_finite()) {
        return Err(EstimatorError::numeric("mass matrix inverse is not finite"));
    }
    let mk = -m_inv * model.k_total();
    let mc = -m_inv * model.c_total();
    let kd = m_inv * model.k_d;
    let mut fc = DMatrix::zeros(NX, NX);
    for i in 0..3 {
        fc[(i, i + 3)] = 1.0;
        for j in 0..3 {
            fc[(i + 3, j)] = mk[(i, j)];
            fc[(i + 3, j + 3)] = mc[(i, j)];
        }
        fc[(i + 3, XI)] = kd[i];
    }
    let mut hc = DMatrix::zeros(NZ, NX);
    hc.row_mut(0).copy_from(&fc.row(3));
    hc[(1, 4)] = 1.0;
    hc.row_mut(2).copy_from(&fc.row(5));
    hc[(3, XI)] = 1.0;
    Ok((fc, hc))
}

/// Everything the recursion needs.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBundle {
    pub fc: DMatrix<f64>,
    pub hc: DMatrix<f64>,
    /// Discrete transition matrix.
    pub f: DMatrix<f64>,
    /// Discrete measurement matrix (equal to `hc`).
    pub h: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
    /// Sampling step (s).
    pub dt: f64,
}

impl FilterBundle {
    /// Generic bundle from discrete matrices only (continuous parts copied
    /// from the discrete ones where meaningless).
    pub fn from_discrete(f: DMatrix<f64>, h: DMatrix<f64>, q: DMatrix<f64>, r: DMatrix<f64>, dt: f64) -> Self {
        Self {
            fc: DMatrix::zeros(f.nrows(), f.ncols()),
            hc: h.clone(),
            f,
            h,
            q,
            r,
            dt,
        }
    }

    /// State dimension.
    pub fn nx(&self) -> usize {
        self.f.nrows()
    }

    /// Measurement dimension.
    pub fn nz(&self) -> usize {
        self.h.nrows()
    }

    /// Checks dimensions, finiteness and symmetry of the covariances.
    pub fn validate(&self) -> Result<()> {
        let n = self.f.nrows();
        let m = self.h.nrows();
        let dims_ok = self.f.ncols() == n
            && self.h.ncols() == n
            && self.q.shape() == (n, n)
            && self.r.shape() == (m, m);
        if !dims_ok {
            return Err(EstimatorError::Config(format!(
                "inconsistent bundle dimensions: F {:?}, H {:?}, Q {:?}, R {:?}",
                self.f.shape(),
                self.h.shape(),
                self.q.shape(),
                self.r.shape()
            )));
        }
        for (name, mat) in [("F", &self.f), ("H", &self.h), ("Q", &self.q), ("R", &self.r)] {
            if !mat.iter().all(|v| v.is_finite()) {
                return Err(EstimatorError::numeric(format!("{name} has non-finite entries")));
            }
        }
        for (name, mat) in [("Q", &self.q), ("R", &self.r)] {
            let scale = mat.amax().max(f64::MIN_POSITIVE);
            if (mat - mat.transpose()).amax() > 1e-12 * scale {
                return Err(EstimatorError::Config(format!("{name} is not symmetric")));
            }
        }
        Ok(())
    }
}

/// Row-major JSON form of the covariance matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceJson {
    pub q: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn from_rows(name: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(EstimatorError::Config(format!("{name} must be a non-empty square array")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl CovarianceJson {
    /// Captures `(Q, R)`.
    pub fn new(q: &DMatrix<f64>, r: &DMatrix<f64>) -> Self {
        Self { q: rows(q), r: rows(r) }
    }

    /// Converts back to matrices.
    pub fn matrices(&self) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        Ok((from_rows("Q", &self.q)?, from_rows("R", &self.r)?))
    }
}
