//! Assembly of the 7-DOF truth model.
//!
//! Coordinates `[y₁, ψ₁, y₂, ψ₂, y_f, ψ_f, y_c]`: leading and trailing
//! wheelset lateral displacement and yaw, bogie frame lateral displacement
//! and yaw, car-body lateral displacement. Wheelset 1 sits at `+a`, wheelset
//! 2 at `−a` from the frame centre.

use alignest_dynamics::{irregularity_stiffness, modal::summarize, ModalSummary};
use nalgebra::{Complex, SMatrix, SVector};

use crate::error::{Result, TruthError};
use crate::params::TruthParams;

/// Number of degrees of freedom.
pub const NDOF: usize = 7;
/// Length of the first-order state `[q, q̇]`.
pub const NSTATE: usize = 2 * NDOF;

/// Names of the first-order state entries, used in diagnostics and exports.
pub const STATE_NAMES: [&str; NSTATE] = [
    "y1_m", "psi1_rad", "y2_m", "psi2_rad", "yf_m", "psif_rad", "yc_m", "vy1_ms", "wpsi1_rads",
    "vy2_ms", "wpsi2_rads", "vyf_ms", "wpsif_rads", "vyc_ms",
];

pub type Mat7 = SMatrix<f64, NDOF, NDOF>;
pub type Mat14 = SMatrix<f64, NSTATE, NSTATE>;
pub type Input = SMatrix<f64, NSTATE, 2>;
pub type State = SVector<f64, NSTATE>;

/// Second-order matrices and the first-order form of the truth model.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthModel {
    pub m: Mat7,
    pub c: Mat7,
    pub k: Mat7,
    /// Irregularity input matrix: column `i` multiplies `ξ_a` under
    /// wheelset `i`.
    pub b: SMatrix<f64, NDOF, 2>,
    /// Companion matrix for `[q, q̇]`.
    pub a_mat: Mat14,
    /// First-order input matrix.
    pub b_mat: Input,
    /// Forward speed (m/s).
    pub v: f64,
}

fn add_outer(target: &mut Mat7, v: &SVector<f64, NDOF>, gain: f64) {
    *target += v * v.transpose() * gain;
}

/// Assembles the truth model at forward speed `v`.
pub fn assemble_truth(tp: &TruthParams, v: f64) -> Result<TruthModel> {
    tp.validate()?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(TruthError::Config(format!("forward speed must be positive, got {v}")));
    }
    let p = &tp.sm;
    let opts = &tp.options;
    let kd = irregularity_stiffness(p, opts.kd_mass);
    let mut m = Mat7::from_diagonal(&SVector::from([
        p.m,
        p.i_w,
        p.m,
        p.i_w,
        tp.m_b,
        tp.i_f,
        tp.car_body_mass(),
    ]));
    let mut c = Mat7::zeros();
    let mut k = Mat7::zeros();
    let mut b = SMatrix::<f64, NDOF, 2>::zeros();
    let yaw_k = opts.yaw_stiffness_factor * p.k_x * p.l_s * p.l_s;
    let yaw_c = opts.yaw_damping_factor * p.c_x * p.l_s * p.l_s;

    for (i, e) in [(0usize, tp.a), (1usize, -tp.a)] {
        let (y, psi) = (2 * i, 2 * i + 1);
        // Contact (Kalker linear creep, knife-edge conical wheels).
        c[(y, y)] += 2.0 * p.f22 / v;
        k[(y, psi)] += -2.0 * p.f22;
        k[(y, y)] += kd[0];
        b[(y, i)] = kd[0];
        c[(psi, psi)] += 2.0 * p.f11 * p.l * p.l / v;
        k[(psi, y)] += kd[1];
        b[(psi, i)] = kd[1];
        // Primary lateral suspension to the frame point above the wheelset.
        let mut d = SVector::<f64, NDOF>::zeros();
        d[y] = 1.0;
        d[4] = -1.0;
        d[5] = -e;
        add_outer(&mut k, &d, 2.0 * p.k_y);
        add_outer(&mut c, &d, 2.0 * p.c_y);
        // Primary yaw suspension.
        let mut w = SVector::<f64, NDOF>::zeros();
        w[psi] = 1.0;
        w[5] = -1.0;
        add_outer(&mut k, &w, yaw_k);
        add_outer(&mut c, &w, yaw_c);
    }
    // Secondary suspension.
    let mut d = SVector::<f64, NDOF>::zeros();
    d[4] = 1.0;
    d[6] = -1.0;
    add_outer(&mut k, &d, tp.k2_y);
    add_outer(&mut c, &d, tp.c2_y);
    k[(5, 5)] += tp.k2_psi;
    c[(5, 5)] += tp.c2_psi;

    if tp.lock_frame_yaw {
        for j in 0..NDOF {
            k[(5, j)] = 0.0;
            k[(j, 5)] = 0.0;
            c[(5, j)] = 0.0;
            c[(j, 5)] = 0.0;
        }
        m[(5, 5)] = 1.0;
    }

    let m_inv = m
        .try_inverse()
        .ok_or_else(|| TruthError::Numeric("truth mass matrix is singular".into()))?;
    let mut a_mat = Mat14::zeros();
    a_mat
        .fixed_view_mut::<NDOF, NDOF>(0, NDOF)
        .copy_from(&Mat7::identity());
    a_mat.fixed_view_mut::<NDOF, NDOF>(NDOF, 0).copy_from(&(-m_inv * k));
    a_mat
        .fixed_view_mut::<NDOF, NDOF>(NDOF, NDOF)
        .copy_from(&(-m_inv * c));
    let mut b_mat = Input::zeros();
    b_mat.fixed_view_mut::<NDOF, 2>(NDOF, 0).copy_from(&(m_inv * b));
    Ok(TruthModel {
        m,
        c,
        k,
        b,
        a_mat,
        b_mat,
        v,
    })
}

/// Eigen-analysis of the truth model (oscillatory modes at speed `v`).
pub fn truth_modal_analysis(tp: &TruthParams, v: f64) -> Result<ModalSummary> {
    let model = assemble_truth(tp, v)?;
    let eigenvalues: Vec<Complex<f64>> = model.a_mat.complex_eigenvalues().iter().copied().collect();
    if eigenvalues.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
        return Err(TruthError::Numeric("truth eigen-decomposition did not converge".into()));
    }
    Ok(summarize(eigenvalues, v))
}
