//! Rail deviations and the four derived irregularity variables.

use crate::error::{Result, TrackError};

/// Relative tolerance used to accept a sampled grid as uniform.
const GRID_RTOL: f64 = 1e-9;

/// Lateral and vertical deviations of the left and right rails, sampled on
/// a uniform arc-length grid (all values in metres).
#[derive(Debug, Clone, PartialEq)]
pub struct RailDeviations {
    pub s_grid: Vec<f64>,
    pub u_y_lr: Vec<f64>,
    pub u_y_rr: Vec<f64>,
    pub u_z_lr: Vec<f64>,
    pub u_z_rr: Vec<f64>,
}

/// Gauge, alignment, cross-level and vertical-profile irregularities on a
/// uniform arc-length grid (metres).
#[derive(Debug, Clone, PartialEq)]
pub struct TrackIrregularityProfile {
    pub s_grid: Vec<f64>,
    pub xi_g: Vec<f64>,
    pub xi_a: Vec<f64>,
    pub xi_cl: Vec<f64>,
    pub xi_vp: Vec<f64>,
}

/// Selects one irregularity variable of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Gauge,
    Alignment,
    CrossLevel,
    VerticalProfile,
}

/// Checks that `s` is a uniform, strictly increasing grid and returns Δs.
pub fn grid_spacing(s: &[f64]) -> Result<f64> {
    if s.len() < 2 {
        return Err(TrackError::Structural(format!(
            "grid needs at least 2 samples, got {}",
            s.len()
        )));
    }
    let ds = s[1] - s[0];
    if !(ds > 0.0) || !ds.is_finite() {
        return Err(TrackError::Structural(format!("grid spacing {ds} must be positive")));
    }
    let span = s[s.len() - 1] - s[0];
    for (k, w) in s.windows(2).enumerate() {
        let d = w[1] - w[0];
        if (d - ds).abs() > GRID_RTOL * span.max(ds) {
            return Err(TrackError::Structural(format!(
                "grid is not uniform at index {k}: spacing {d} vs {ds}"
            )));
        }
    }
    Ok(ds)
}

/// Builds the uniform grid `s_k = k·ds`, `k = 0..=round(length/ds)`.
pub fn uniform_grid(length: f64, ds: f64) -> Vec<f64> {
    let n = (length / ds).round() as usize + 1;
    (0..n).map(|k| k as f64 * ds).collect()
}

fn check_lengths(n: usize, named: &[(&str, usize)]) -> Result<()> {
    for (name, len) in named {
        if *len != n {
            return Err(TrackError::Structural(format!(
                "{name} has {len} samples but the grid has {n}"
            )));
        }
    }
    Ok(())
}

impl RailDeviations {
    /// Validates equal lengths and a uniform grid.
    pub fn validate(&self) -> Result<()> {
        check_lengths(
            self.s_grid.len(),
            &[
                ("u_y_lr", self.u_y_lr.len()),
                ("u_y_rr", self.u_y_rr.len()),
                ("u_z_lr", self.u_z_lr.len()),
                ("u_z_rr", self.u_z_rr.len()),
            ],
        )?;
        grid_spacing(&self.s_grid).map(|_| ())
    }

    /// Straight-track rails with a common lateral alignment (zero gauge
    /// variation) and optional independent vertical deviations.
    pub fn from_alignment(
        s_grid: Vec<f64>,
        alignment: &[f64],
        vertical: Option<(&[f64], &[f64])>,
    ) -> Result<Self> {
        let n = s_grid.len();
        let (zl, zr) = match vertical {
            Some((l, r)) => (l.to_vec(), r.to_vec()),
            None => (vec![0.0; n], vec![0.0; n]),
        };
        let rails = Self {
            s_grid,
            u_y_lr: alignment.to_vec(),
            u_y_rr: alignment.to_vec(),
            u_z_lr: zl,
            u_z_rr: zr,
        };
        rails.validate()?;
        Ok(rails)
    }
}

/// Maps rail deviations to the irregularity variables:
/// gauge = difference and alignment = mean of the lateral deviations,
/// cross-level = difference and vertical profile = mean of the vertical ones.
pub fn decompose(rails: &RailDeviations) -> Result<TrackIrregularityProfile> {
    rails.validate()?;
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
    let mean = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect::<Vec<_>>();
    Ok(TrackIrregularityProfile {
        s_grid: rails.s_grid.clone(),
        xi_g: diff(&rails.u_y_lr, &rails.u_y_rr),
        xi_a: mean(&rails.u_y_lr, &rails.u_y_rr),
        xi_cl: diff(&rails.u_z_lr, &rails.u_z_rr),
        xi_vp: mean(&rails.u_z_lr, &rails.u_z_rr),
    })
}

/// Inverse of [`decompose`]: left rail = mean + difference/2, right rail =
/// mean − difference/2.
pub fn compose(profile: &TrackIrregularityProfile) -> Result<RailDeviations> {
    profile.validate()?;
    let left = |m: &[f64], d: &[f64]| m.iter().zip(d).map(|(m, d)| m + 0.5 * d).collect::<Vec<_>>();
    let right = |m: &[f64], d: &[f64]| m.iter().zip(d).map(|(m, d)| m - 0.5 * d).collect::<Vec<_>>();
    Ok(RailDeviations {
        s_grid: profile.s_grid.clone(),
        u_y_lr: left(&profile.xi_a, &profile.xi_g),
        u_y_rr: right(&profile.xi_a, &profile.xi_g),
        u_z_lr: left(&profile.xi_vp, &profile.xi_cl),
        u_z_rr: right(&profile.xi_vp, &profile.xi_cl),
    })
}

impl TrackIrregularityProfile {
    /// Profile with only lateral alignment (all other variables zero).
    pub fn from_alignment(s_grid: Vec<f64>, xi_a: Vec<f64>) -> Result<Self> {
        let n = s_grid.len();
        let p = Self {
            s_grid,
            xi_g: vec![0.0; n],
            xi_a,
            xi_cl: vec![0.0; n],
            xi_vp: vec![0.0; n],
        };
        p.validate()?;
        Ok(p)
    }

    /// Validates equal lengths and a uniform grid.
    pub fn validate(&self) -> Result<()> {
        check_lengths(
            self.s_grid.len(),
            &[
                ("xi_g", self.xi_g.len()),
                ("xi_a", self.xi_a.len()),
                ("xi_cl", self.xi_cl.len()),
                ("xi_vp", self.xi_vp.len()),
            ],
        )?;
        grid_spacing(&self.s_grid).map(|_| ())
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.s_grid.len()
    }

    /// Whether the profile has no samples.
    pub fn is_empty(&self) -> bool {
        self.s_grid.is_empty()
    }

    /// Grid spacing Δs (assumes a validated profile).
    pub fn ds(&self) -> f64 {
        self.s_grid[1] - self.s_grid[0]
    }

    /// Last grid abscissa.
    pub fn s_max(&self) -> f64 {
        *self.s_grid.last().unwrap_or(&0.0)
    }

    /// Borrow one variable's samples.
    pub fn variable(&self, var: Variable) -> &[f64] {
        match var {
            Variable::Gauge => &self.xi_g,
            Variable::Alignment => &self.xi_a,
            Variable::CrossLevel => &self.xi_cl,
            Variable::VerticalProfile => &self.xi_vp,
        }
    }

    /// Linear interpolation of `var` at arc length `s`; values outside the
    /// grid are clamped to the end samples.
    pub fn sample(&self, var: Variable, s: f64) -> f64 {
        interp_uniform(self.s_grid[0], self.ds(), self.variable(var), s)
    }

    /// Pointwise sum of two profiles on the same grid.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.s_grid.len() != other.s_grid.len() {
            return Err(TrackError::Structural(format!(
                "cannot add profiles with {} and {} samples",
                self.s_grid.len(),
                other.s_grid.len()
            )));
        }
        let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        Ok(Self {
            s_grid: self.s_grid.clone(),
            xi_g: add(&self.xi_g, &other.xi_g),
            xi_a: add(&self.xi_a, &other.xi_a),
            xi_cl: add(&self.xi_cl, &other.xi_cl),
            xi_vp: add(&self.xi_vp, &other.xi_vp),
        })
    }
}

/// Linear interpolation on a uniform grid starting at `s0` with spacing
/// `ds`; clamps outside the sampled range.
pub fn interp_uniform(s0: f64, ds: f64, values: &[f64], s: f64) -> f64 {
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    let u = (s - s0) / ds;
    if u <= 0.0 {
        return values[0];
    }
    let k = u.floor() as usize;
    if k + 1 >= n {
        return values[n - 1];
    }
    let w = u - k as f64;
    values[k] * (1.0 - w) + values[k + 1] * w
}
