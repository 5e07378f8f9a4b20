//! Rational track-irregularity PSD and spectral-representation synthesis.
//!
//! The one-sided spatial PSD is
//! `S(Ω) = A·Ω_c² / ((Ω² + Ω_r²)(Ω² + Ω_c²))` with `Ω` in rad/m and `A` in
//! m·rad. Samples are synthesised as a sum of cosines
//! `ξ(s) = Σ_n √(2·S(Ω_n)·ΔΩ)·cos(Ω_n·s + φ_n)` over uniformly spaced
//! wavenumbers inside the wavelength window, with phases drawn from a seeded
//! ChaCha generator so that a given seed always reproduces the same signal.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TrackError};

/// Default low break wavenumber Ω_r (rad/m).
pub const DEFAULT_OMEGA_R: f64 = 0.0206;
/// Default high break wavenumber Ω_c (rad/m).
pub const DEFAULT_OMEGA_C: f64 = 0.8246;
/// Default shortest synthesised wavelength (m).
pub const DEFAULT_LAMBDA_MIN: f64 = 3.0;
/// Default longest synthesised wavelength (m).
pub const DEFAULT_LAMBDA_MAX: f64 = 200.0;
/// Target rms of the default alignment profile over the window (m).
pub const DEFAULT_ALIGNMENT_RMS: f64 = 1.5e-3;
/// Target rms of each default vertical rail profile over the window (m).
pub const DEFAULT_VERTICAL_RAIL_RMS: f64 = 0.5e-3;
/// Number of spectral lines per fundamental wavenumber spacing 2π/L.
const LINES_PER_FUNDAMENTAL: usize = 4;

/// Which irregularity variable a PSD describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsdVariable {
    Alignment,
    VerticalProfile,
    CrossLevel,
}

/// Parameters of the rational PSD and of its synthesis window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsdSpec {
    pub variable: PsdVariable,
    /// Scale factor A (m·rad).
    pub a: f64,
    /// Low break wavenumber Ω_r (rad/m).
    #[serde(default = "default_omega_r")]
    pub omega_r: f64,
    /// High break wavenumber Ω_c (rad/m).
    #[serde(default = "default_omega_c")]
    pub omega_c: f64,
    /// Shortest synthesised wavelength (m).
    #[serde(default = "default_lambda_min")]
    pub lambda_min: f64,
    /// Longest synthesised wavelength (m).
    #[serde(default = "default_lambda_max")]
    pub lambda_max: f64,
    /// Phase seed; `None` defers to the seed supplied by the caller.
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_omega_r() -> f64 {
    DEFAULT_OMEGA_R
}
fn default_omega_c() -> f64 {
    DEFAULT_OMEGA_C
}
fn default_lambda_min() -> f64 {
    DEFAULT_LAMBDA_MIN
}
fn default_lambda_max() -> f64 {
    DEFAULT_LAMBDA_MAX
}

impl PsdSpec {
    /// Spec with default break wavenumbers and window, scaled so that the
    /// synthesised signal has the given rms over the window.
    pub fn with_rms(variable: PsdVariable, rms: f64, seed: Option<u64>) -> Self {
        let mut spec = Self {
            variable,
            a: 1.0,
            omega_r: DEFAULT_OMEGA_R,
            omega_c: DEFAULT_OMEGA_C,
            lambda_min: DEFAULT_LAMBDA_MIN,
            lambda_max: DEFAULT_LAMBDA_MAX,
            seed,
        };
        spec.a = rms * rms / spec.variance();
        spec
    }

    /// Default alignment spec (1.5 mm rms over 3–200 m).
    pub fn default_alignment() -> Self {
        Self::with_rms(PsdVariable::Alignment, DEFAULT_ALIGNMENT_RMS, None)
    }

    /// Default per-rail vertical spec (0.5 mm rms over 3–200 m).
    pub fn default_vertical_rail() -> Self {
        Self::with_rms(PsdVariable::VerticalProfile, DEFAULT_VERTICAL_RAIL_RMS, None)
    }

    /// Checks the documented parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let ok = self.a >= 0.0
            && self.a.is_finite()
            && self.omega_r > 0.0
            && self.omega_r < self.omega_c
            && self.omega_c.is_finite()
            && self.lambda_min > 0.0
            && self.lambda_min < self.lambda_max
            && self.lambda_max.is_finite();
        if ok {
            Ok(())
        } else {
            Err(TrackError::Config(format!(
                "invalid PSD spec: need A >= 0, 0 < omega_r < omega_c, 0 < lambda_min < lambda_max (got {self:?})"
            )))
        }
    }

    /// Window wavenumber bounds `(Ω_0, Ω_1) = (2π/λ_max, 2π/λ_min)`.
    pub fn window(&self) -> (f64, f64) {
        (2.0 * PI / self.lambda_max, 2.0 * PI / self.lambda_min)
    }

    /// One-sided PSD value at wavenumber `omega` (m²/(rad/m)).
    pub fn density(&self, omega: f64) -> f64 {
        let o2 = omega * omega;
        self.a * self.omega_c * self.omega_c
            / ((o2 + self.omega_r * self.omega_r) * (o2 + self.omega_c * self.omega_c))
    }

    /// Closed-form integral of the PSD over the window, i.e. the variance of
    /// the synthesised signal (m²), via partial fractions.
    pub fn variance(&self) -> f64 {
        let (o0, o1) = self.window();
        let (r, c) = (self.omega_r, self.omega_c);
        let prim = |o: f64| (o / r).atan() / r - (o / c).atan() / c;
        self.a * c * c / (c * c - r * r) * (prim(o1) - prim(o0))
    }
}

/// Synthesises a sampled irregularity on the grid `s_k = k·ds` covering
/// `[0, length]`.
///
/// `seed` is used when the spec carries none; `stream` selects an
/// independent ChaCha stream so that several signals (e.g. left and right
/// rails) can be drawn from one seed without correlation.
pub fn generate_psd_profile(
    spec: &PsdSpec,
    length: f64,
    ds: f64,
    seed: u64,
    stream: u64,
) -> Result<Vec<f64>> {
    spec.validate()?;
    if !(length > 0.0) || !(ds > 0.0) {
        return Err(TrackError::Config(format!(
            "length ({length}) and ds ({ds}) must be positive"
        )));
    }
    if spec.lambda_min < 2.0 * ds {
        return Err(TrackError::Config(format!(
            "Nyquist violation: lambda_min = {} m < 2·ds = {} m",
            spec.lambda_min,
            2.0 * ds
        )));
    }
    let grid = crate::profile::uniform_grid(length, ds);
    let mut out = vec![0.0; grid.len()];
    if spec.a == 0.0 {
        return Ok(out);
    }
    let (o0, o1) = spec.window();
    let fundamentals = ((o1 - o0) * length / (2.0 * PI)).ceil().max(1.0) as usize;
    let n_lines = LINES_PER_FUNDAMENTAL * fundamentals;
    let d_omega = (o1 - o0) / n_lines as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.unwrap_or(seed));
    rng.set_stream(stream);
    for n in 0..n_lines {
        let omega = o0 + (n as f64 + 0.5) * d_omega;
        let phase = rng.random::<f64>() * 2.0 * PI;
        let amp = (2.0 * spec.density(omega) * d_omega).sqrt();
        for (x, s) in out.iter_mut().zip(&grid) {
            *x += amp * (omega * s + phase).cos();
        }
    }
    Ok(out)
}

/// Deterministic harmonic irregularity `amplitude·sin(2πs/wavelength)` on
/// the grid `s_k = k·ds` covering `[0, length]`.
pub fn generate_harmonic_profile(
    amplitude: f64,
    wavelength: f64,
    length: f64,
    ds: f64,
) -> Result<Vec<f64>> {
    if !(wavelength > 0.0) || !(length > 0.0) || !(ds > 0.0) {
        return Err(TrackError::Config(format!(
            "wavelength ({wavelength}), length ({length}) and ds ({ds}) must be positive"
        )));
    }
    Ok(crate::profile::uniform_grid(length, ds)
        .iter()
        .map(|s| amplitude * (2.0 * PI * s / wavelength).sin())
        .collect())
}
