//! Linear Kalman filter recursion.
//!
//! The recursion runs on a diagonally rescaled state (`x = D·x̃` with
//! `D = diag(√P₀)`) so that metres, radians and their rates have comparable
//! magnitudes, and uses the Joseph form of the covariance update, which
//! keeps `P` symmetric positive semidefinite under round-off. Both
//! transformations leave the exact-arithmetic result unchanged.

use nalgebra::{DMatrix, DVector};

use crate::bundle::FilterBundle;
use crate::error::{EstimatorError, Result};

/// Filter output for a measurement sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct KfOutput {
    /// A-priori estimates `x̂_k⁻`.
    pub x_prior: Vec<DVector<f64>>,
    /// A-posteriori estimates `x̂_k⁺`.
    pub x_post: Vec<DVector<f64>>,
    /// A-posteriori covariances `P_k⁺`.
    pub p_post: Vec<DMatrix<f64>>,
    /// Innovations `z_k − H·x̂_k⁻`.
    pub innovations: Vec<DVector<f64>>,
}

impl KfOutput {
    /// Component `i` of every a-posteriori estimate.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.x_post.iter().map(|x| x[i]).collect()
    }

    /// Steady-state a-priori covariance of the last step, `F·P⁺·Fᵀ + Q`.
    pub fn last_prior_covariance(&self, bundle: &FilterBundle) -> Option<DMatrix<f64>> {
        self.p_post
            .last()
            .map(|p| &bundle.f * p * bundle.f.transpose() + &bundle.q)
    }
}

fn scaling(p0: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(
        p0.nrows(),
        p0.diagonal().iter().map(|&v| if v > 0.0 { v.sqrt() } else { 1.0 }),
    )
}

/// Runs predict/update over `z_seq` starting from `(x0, P0)`.
///
/// Step `k` predicts from the previous posterior (`x0`, `P0` for `k = 0`)
/// and then assimilates `z_k`.
pub fn kf_run(
    bundle: &FilterBundle,
    z_seq: &[DVector<f64>],
    x0: &DVector<f64>,
    p0: &DMatrix<f64>,
) -> Result<KfOutput> {
    bundle.validate()?;
    let n = bundle.nx();
    let m = bundle.nz();
    if z_seq.is_empty() {
        return Err(EstimatorError::Config("measurement sequence is empty".into()));
    }
    if x0.len() != n || p0.shape() != (n, n) {
        return Err(EstimatorError::Config(format!(
            "initial state/covariance must have dimension {n}, got {} and {:?}",
            x0.len(),
            p0.shape()
        )));
    }
    if let Some(k) = z_seq.iter().position(|z| z.len() != m) {
        return Err(EstimatorError::Config(format!(
            "measurement {k} has dimension {}, expected {m}",
            z_seq[k].len()
        )));
    }

    let d = scaling(p0);
    let d_inv = d.map(|v| 1.0 / v);
    let dm = DMatrix::from_diagonal(&d);
    let dm_inv = DMatrix::from_diagonal(&d_inv);
    let f = &dm_inv * &bundle.f * &dm;
    let ft = f.transpose();
    let h = &bundle.h * &dm;
    let ht = h.transpose();
    let q = &dm_inv * &bundle.q * &dm_inv;
    let r = &bundle.r;
    let eye = DMatrix::<f64>::identity(n, n);

    let mut x = x0.component_mul(&d_inv);
    let mut p = &dm_inv * p0 * &dm_inv;

    let cap = z_seq.len();
    let mut out = KfOutput {
        x_prior: Vec::with_capacity(cap),
        x_post: Vec::with_capacity(cap),
        p_post: Vec::with_capacity(cap),
        innovations: Vec::with_capacity(cap),
    };

    for (k, z) in z_seq.iter().enumerate() {
        if !z.iter().all(|v| v.is_finite()) {
            return Err(EstimatorError::at_step(k, "measurement contains non-finite values"));
        }
        // Predict.
        let x_prior = &f * &x;
        let p_prior = &f * &p * &ft + &q;
        // Gain.
        let pht = &p_prior * &ht;
        let s = &h * &pht + r;
        let s = (&s + s.transpose()) * 0.5;
        let gain_t = match s.clone().cholesky() {
            Some(ch) => ch.solve(&pht.transpose()),
            None => s.clone().lu().solve(&pht.transpose()).ok_or_else(|| {
                EstimatorError::at_step(k, "innovation covariance is not invertible")
            })?,
        };
        let gain = gain_t.transpose();
        // Update (Joseph form).
        let innovation = z - &h * &x_prior;
        x = &x_prior + &gain * &innovation;
        let a = &eye - &gain * &h;
        p = &a * &p_prior * a.transpose() + &gain * r * gain.transpose();
        p = (&p + p.transpose()) * 0.5;
        if !x.iter().all(|v| v.is_finite()) || !p.iter().all(|v| v.is_finite()) {
            return Err(EstimatorError::at_step(k, "filter state became non-finite"));
        }
        out.x_prior.push(x_prior.component_mul(&d));
        out.x_post.push(x.component_mul(&d));
        let p_phys = &dm * &p * &dm;
        out.p_post.push((&p_phys + p_phys.transpose()) * 0.5);
        out.innovations.push(innovation);
    }
    Ok(out)
}
