//! Equivalent parameters of the simplified model.

use serde::{Deserialize, Serialize};

use crate::error::{DynamicsError, Result};

/// Gravitational acceleration (m/s²).
pub const GRAVITY: f64 = 9.81;

/// The 15-entry parameter vector of the simplified model plus gravity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmParams {
    /// Wheelset mass (kg).
    pub m: f64,
    /// Wheelset yaw inertia (kg·m²).
    pub i_w: f64,
    /// Half-width of the wheelset (m).
    pub l: f64,
    /// Half-length to the primary suspension (m).
    pub l_s: f64,
    /// Nominal conicity (–).
    pub alpha: f64,
    /// Nominal rolling radius (m).
    pub r0: f64,
    /// Suspended frame mass (kg).
    pub m_f: f64,
    /// Longitudinal creep coefficient (N).
    pub f11: f64,
    /// Lateral creep coefficient (N).
    pub f22: f64,
    /// Lateral/spin creep coefficient (N·m).
    pub f23: f64,
    /// Spin/spin creep coefficient (N·m²).
    pub f33: f64,
    /// Longitudinal primary stiffness (N/m).
    pub k_x: f64,
    /// Lateral primary stiffness (N/m).
    pub k_y: f64,
    /// Longitudinal primary damping (N·s/m).
    pub c_x: f64,
    /// Lateral primary damping (N·s/m).
    pub c_y: f64,
    /// Gravitational acceleration (m/s²).
    #[serde(default = "default_g")]
    pub g: f64,
}

fn default_g() -> f64 {
    GRAVITY
}

impl Default for SmParams {
    fn default() -> Self {
        Self::reference_vehicle()
    }
}

impl SmParams {
    /// Equivalent parameters of the reference metro vehicle.
    pub fn reference_vehicle() -> Self {
        Self {
            m: 1109.0,
            i_w: 606.0,
            l: 0.75,
            l_s: 0.85,
            alpha: 0.1,
            r0: 0.85,
            m_f: 3781.0,
            f11: 5.5e6,
            f22: 5.0e6,
            f23: 9.3e3,
            f33: 15.0,
            k_x: 7.95e5,
            k_y: 4.12e6,
            c_x: 1.47e4,
            c_y: 1.41e5,
            g: GRAVITY,
        }
    }

    /// Checks positivity and range constraints.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m", self.m),
            ("i_w", self.i_w),
            ("l", self.l),
            ("l_s", self.l_s),
            ("r0", self.r0),
            ("m_f", self.m_f),
            ("f11", self.f11),
            ("f22", self.f22),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DynamicsError::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let non_negative = [
            ("f23", self.f23),
            ("f33", self.f33),
            ("k_x", self.k_x),
            ("k_y", self.k_y),
            ("c_x", self.c_x),
            ("c_y", self.c_y),
            ("g", self.g),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(DynamicsError::Config(format!("{name} must be non-negative and finite, got {v}")));
            }
        }
        if !(self.alpha >= 0.0 && self.alpha < 1.0) {
            return Err(DynamicsError::Config(format!("alpha must lie in [0, 1), got {}", self.alpha)));
        }
        Ok(())
    }
}

/// Optimisable suspension parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptParam {
    KX,
    CX,
    KY,
    CY,
}

impl OptParam {
    /// The identification subset in canonical order.
    pub const ALL: [OptParam; 4] = [OptParam::KX, OptParam::CX, OptParam::KY, OptParam::CY];

    /// Parameter name as used in reports.
    pub fn name(self) -> &'static str {
        match self {
            OptParam::KX => "k_x",
            OptParam::CX => "c_x",
            OptParam::KY => "k_y",
            OptParam::CY => "c_y",
        }
    }

    /// Reads the parameter from `p`.
    pub fn get(self, p: &SmParams) -> f64 {
        match self {
            OptParam::KX => p.k_x,
            OptParam::CX => p.c_x,
            OptParam::KY => p.k_y,
            OptParam::CY => p.c_y,
        }
    }

    /// Writes the parameter into `p`.
    pub fn set(self, p: &mut SmParams, v: f64) {
        match self {
            OptParam::KX => p.k_x = v,
            OptParam::CX => p.c_x = v,
            OptParam::KY => p.k_y = v,
            OptParam::CY => p.c_y = v,
        }
    }
}
