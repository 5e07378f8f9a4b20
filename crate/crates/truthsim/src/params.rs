//! Parameters of the truth model.

use alignest_dynamics::{SmOptions, SmParams};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TruthError};

/// Parameters of the two-wheelset bogie model.
///
/// The wheelset, creep and primary-suspension entries are shared with the
/// simplified model; the remaining entries are surrogate constants for the
/// bogie frame, the car-body share and the secondary suspension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruthParams {
    /// Wheelset, creep and primary-suspension parameters.
    pub sm: SmParams,
    /// Structural options shared with the simplified model (yaw suspension
    /// factors, mass form of the gravitational stiffness).
    pub options: SmOptions,
    /// Half wheelbase (m).
    pub a: f64,
    /// Bogie frame yaw inertia (kg·m²).
    pub i_f: f64,
    /// Bogie frame mass (kg).
    pub m_b: f64,
    /// Lumped car-body mass share (kg); `None` means `2·m_f − m_b`, so that
    /// each wheelset carries `m_f` of suspended mass.
    pub m_c: Option<f64>,
    /// Secondary lateral stiffness (N/m).
    pub k2_y: f64,
    /// Secondary lateral damping (N·s/m).
    pub c2_y: f64,
    /// Secondary yaw stiffness between frame and car body (N·m/rad).
    pub k2_psi: f64,
    /// Secondary yaw damping (N·m·s/rad).
    pub c2_psi: f64,
    /// Time constant of the roll lag on the frame accelerometer's
    /// cross-level contamination (s).
    pub roll_lag_tau: f64,
    /// Locks the frame yaw (structural-consistency experiments).
    pub lock_frame_yaw: bool,
}

impl Default for TruthParams {
    fn default() -> Self {
        Self {
            sm: SmParams::reference_vehicle(),
            options: SmOptions::default(),
            a: 1.25,
            i_f: 2700.0,
            m_b: 2000.0,
            m_c: None,
            k2_y: 4.0e5,
            c2_y: 3.0e4,
            k2_psi: 1.0e8,
            c2_psi: 1.0e6,
            roll_lag_tau: 0.3,
            lock_frame_yaw: false,
        }
    }
}

impl TruthParams {
    /// Car-body share actually used.
    pub fn car_body_mass(&self) -> f64 {
        self.m_c.unwrap_or(2.0 * self.sm.m_f - self.m_b)
    }

    /// Checks ranges.
    pub fn validate(&self) -> Result<()> {
        self.sm.validate()?;
        let positive = [
            ("i_f", self.i_f),
            ("m_b", self.m_b),
            ("m_c", self.car_body_mass()),
            ("roll_lag_tau", self.roll_lag_tau),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(TruthError::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let non_negative = [
            ("a", self.a),
            ("k2_y", self.k2_y),
            ("c2_y", self.c2_y),
            ("k2_psi", self.k2_psi),
            ("c2_psi", self.c2_psi),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(TruthError::Config(format!(
                    "{name} must be non-negative and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}
