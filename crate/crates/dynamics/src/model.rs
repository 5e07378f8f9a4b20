//! Assembly of the linear lateral model `M q̈ + (C_s + C_c) q̇ + (K_s + K_c) q = Q_c,0`
//! with generalized coordinates `q = [y, ψ, y_f]` (wheelset lateral
//! displacement, wheelset yaw, frame lateral displacement).

use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{DynamicsError, Result};
use crate::params::SmParams;

/// Mass term used in the gravitational irregularity stiffness `K_d[0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KdMassForm {
    /// `2αg(m − m_f)/l` (reference form).
    #[default]
    Difference,
    /// `2αg(m + m_f)/l` (sensitivity alternative).
    Sum,
}

/// Structural options of the assembly that are not part of the parameter
/// vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SmOptions {
    /// Mass form of `K_d[0]`.
    pub kd_mass: KdMassForm,
    /// Multiplier `a` of the yaw suspension stiffness `a·k_x·l_s²`.
    pub yaw_stiffness_factor: f64,
    /// Multiplier `b` of the yaw suspension damping `b·c_x·l_s²`.
    pub yaw_damping_factor: f64,
}

impl Default for SmOptions {
    fn default() -> Self {
        Self {
            kd_mass: KdMassForm::Difference,
            yaw_stiffness_factor: 2.0,
            yaw_damping_factor: 0.5,
        }
    }
}

/// Assembled matrices of the simplified model at forward speed `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearLateralModel {
    pub m: Matrix3<f64>,
    pub c_s: Matrix3<f64>,
    pub k_s: Matrix3<f64>,
    pub c_c: Matrix3<f64>,
    pub k_c: Matrix3<f64>,
    /// Irregularity-input stiffness `∂Q_c,0/∂ξ`.
    pub k_d: Vector3<f64>,
    /// Irregularity-rate input `∂Q_c,0/∂ξ̇` (identically zero).
    pub c_d: Vector3<f64>,
    /// Forward speed (m/s).
    pub v: f64,
    m_inv: Matrix3<f64>,
}

impl LinearLateralModel {
    /// Total damping `C_s + C_c`.
    pub fn c_total(&self) -> Matrix3<f64> {
        self.c_s + self.c_c
    }

    /// Total stiffness `K_s + K_c`.
    pub fn k_total(&self) -> Matrix3<f64> {
        self.k_s + self.k_c
    }

    /// Inverse mass matrix, computed once at assembly.
    pub fn m_inv(&self) -> &Matrix3<f64> {
        &self.m_inv
    }

    /// First-order companion matrix of the homogeneous dynamics for the
    /// state `[q, q̇]`.
    pub fn companion(&self) -> Matrix6<f64> {
        let mut a = Matrix6::zeros();
        a.fixed_view_mut::<3, 3>(0, 3).copy_from(&Matrix3::identity());
        a.fixed_view_mut::<3, 3>(3, 0).copy_from(&(-self.m_inv * self.k_total()));
        a.fixed_view_mut::<3, 3>(3, 3).copy_from(&(-self.m_inv * self.c_total()));
        a
    }

    /// Irregularity input column of the first-order system.
    pub fn input_column(&self) -> Vector6<f64> {
        let mut b = Vector6::zeros();
        b.fixed_rows_mut::<3>(3).copy_from(&(self.m_inv * self.k_d));
        b
    }
}

/// Irregularity-input stiffness vector `K_d = [2αg(m ∓ m_f)/l, 2α·f11·l/r0, 0]`.
pub fn irregularity_stiffness(p: &SmParams, form: KdMassForm) -> Vector3<f64> {
    let mass = match form {
        KdMassForm::Difference => p.m - p.m_f,
        KdMassForm::Sum => p.m + p.m_f,
    };
    Vector3::new(
        2.0 * p.alpha * p.g * mass / p.l,
        2.0 * p.alpha * p.f11 * p.l / p.r0,
        0.0,
    )
}

/// Assembles the model with default [`SmOptions`].
pub fn assemble_sm(p: &SmParams, v: f64) -> Result<LinearLateralModel> {
    assemble_sm_with(p, v, &SmOptions::default())
}

/// Assembles the simplified model at forward speed `v`.
///
/// Contact terms follow linear Kalker creep on a conical wheelset: the
/// lateral creep force gives damping `2f22/V` on `ẏ` and stiffness `−2f22`
/// on `ψ`; the longitudinal creep moment gives damping `2f11·l²/V` on `ψ̇`
/// and stiffness `2f11·l·α/r0` on `y`. The gravitational stiffness `K_d[0]`
/// acts on `y` as well as on `ξ`, so that the contact forces depend only on
/// the wheelset position relative to the rails. Spin creep (f23, f33) is
/// neglected.
pub fn assemble_sm_with(p: &SmParams, v: f64, opts: &SmOptions) -> Result<LinearLateralModel> {
    p.validate()?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(DynamicsError::Config(format!("forward speed must be positive, got {v}")));
    }
    if !(opts.yaw_stiffness_factor >= 0.0 && opts.yaw_damping_factor >= 0.0) {
        return Err(DynamicsError::Config("yaw suspension factors must be non-negative".into()));
    }
    let m = Matrix3::from_diagonal(&Vector3::new(p.m, p.i_w, p.m_f));
    let k_d = irregularity_stiffness(p, opts.kd_mass);

    let (ky2, cy2) = (2.0 * p.k_y, 2.0 * p.c_y);
    let yaw_k = opts.yaw_stiffness_factor * p.k_x * p.l_s * p.l_s;
    let yaw_c = opts.yaw_damping_factor * p.c_x * p.l_s * p.l_s;
    #[rustfmt::skip]
    let k_s = Matrix3::new(
        ky2,  0.0,   -ky2,
        0.0,  yaw_k, 0.0,
        -ky2, 0.0,   ky2,
    );
    #[rustfmt::skip]
    let c_s = Matrix3::new(
        cy2,  0.0,   -cy2,
        0.0,  yaw_c, 0.0,
        -cy2, 0.0,   cy2,
    );

    let mut c_c = Matrix3::zeros();
    c_c[(0, 0)] = 2.0 * p.f22 / v;
    c_c[(1, 1)] = 2.0 * p.f11 * p.l * p.l / v;
    let mut k_c = Matrix3::zeros();
    k_c[(0, 0)] = k_d[0];
    k_c[(0, 1)] = -2.0 * p.f22;
    k_c[(1, 0)] = k_d[1];

    let m_inv = m
        .try_inverse()
        .ok_or_else(|| DynamicsError::Numeric("mass matrix is singular".into()))?;
    let model = LinearLateralModel {
        m,
        c_s,
        k_s,
        c_c,
        k_c,
        k_d,
        c_d: Vector3::zeros(),
        v,
        m_inv,
    };
    let finite = model.k_total().iter().chain(model.c_total().iter()).all(|x| x.is_finite());
    if !finite {
        return Err(DynamicsError::Numeric("assembled matrices contain non-finite entries".into()));
    }
    Ok(model)
}

/// Generalized contact force at zero coordinates: `Q_c,0 = K_d·ξ + C_d·ξ̇`.
pub fn irregularity_force(model: &LinearLateralModel, xi: f64, xi_dot: f64) -> Vector3<f64> {
    model.k_d * xi + model.c_d * xi_dot
}

/// Generalized accelerations `q̈ = M⁻¹(Q_c,0(ξ, ξ̇) − C q̇ − K q)`.
pub fn sm_accelerations(
    model: &LinearLateralModel,
    q: &Vector3<f64>,
    q_dot: &Vector3<f64>,
    xi: f64,
    xi_dot: f64,
) -> Vector3<f64> {
    model.m_inv
        * (irregularity_force(model, xi, xi_dot) - model.c_total() * q_dot - model.k_total() * q)
}
