//! Sensor noise specification and injection.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TruthError};

/// Default standard deviation of the virtual irregularity pseudo-measurement (m).
pub const DEFAULT_SIGMA_XI_VIRTUAL: f64 = 0.3;

/// Fraction of the peak clean amplitude used as noise level by
/// [`sensor_noise_autoscale`].
pub const AUTOSCALE_FRACTION: f64 = 0.10;

/// Standard deviations of the white Gaussian sensor noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    /// Wheelset accelerometer (m/s²).
    pub sigma_acc_w: f64,
    /// Wheelset yaw-rate gyroscope (rad/s).
    pub sigma_gyro: f64,
    /// Frame accelerometer (m/s²).
    pub sigma_acc_f: f64,
    /// Virtual irregularity pseudo-measurement (m); used by the filter only.
    #[serde(default = "default_sigma_xi_virtual")]
    pub sigma_xi_virtual: f64,
    /// Seed of the noise generator.
    #[serde(default)]
    pub seed: u64,
}

fn default_sigma_xi_virtual() -> f64 {
    DEFAULT_SIGMA_XI_VIRTUAL
}

impl NoiseSpec {
    /// No sensor noise.
    pub fn zero() -> Self {
        Self {
            sigma_acc_w: 0.0,
            sigma_gyro: 0.0,
            sigma_acc_f: 0.0,
            sigma_xi_virtual: DEFAULT_SIGMA_XI_VIRTUAL,
            seed: 0,
        }
    }

    /// Channel standard deviations `[acc_w, gyro, acc_f]`.
    pub fn channel_sigmas(&self) -> [f64; 3] {
        [self.sigma_acc_w, self.sigma_gyro, self.sigma_acc_f]
    }

    /// True when no noise would be injected.
    pub fn is_silent(&self) -> bool {
        self.channel_sigmas().iter().all(|&s| s == 0.0)
    }

    /// Checks that all deviations are non-negative and finite.
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("sigma_acc_w", self.sigma_acc_w),
            ("sigma_gyro", self.sigma_gyro),
            ("sigma_acc_f", self.sigma_acc_f),
            ("sigma_xi_virtual", self.sigma_xi_virtual),
        ];
        for (name, v) in all {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(TruthError::Config(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    /// Returns `clean` plus seeded Gaussian draws, channel by channel and
    /// sample by sample in a fixed order.
    pub fn apply(&self, clean: &[[f64; 3]]) -> Result<Vec<[f64; 3]>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let dists = self.channel_sigmas().map(|s| Normal::new(0.0, s).expect("validated sigma"));
        Ok(clean
            .iter()
            .map(|row| {
                let mut out = *row;
                for (c, d) in dists.iter().enumerate() {
                    out[c] += d.sample(&mut rng);
                }
                out
            })
            .collect())
    }
}

/// Noise levels set to a fixed fraction of each clean channel's peak
/// absolute value; `sigma_xi_virtual` and `seed` are passed through.
pub fn sensor_noise_autoscale(clean: &[[f64; 3]], sigma_xi_virtual: f64, seed: u64) -> Result<NoiseSpec> {
    if clean.is_empty() {
        return Err(TruthError::Config("cannot autoscale noise from empty channels".into()));
    }
    let mut peak = [0.0f64; 3];
    for row in clean {
        for c in 0..3 {
            peak[c] = peak[c].max(row[c].abs());
        }
    }
    let spec = NoiseSpec {
        sigma_acc_w: AUTOSCALE_FRACTION * peak[0],
        sigma_gyro: AUTOSCALE_FRACTION * peak[1],
        sigma_acc_f: AUTOSCALE_FRACTION * peak[2],
        sigma_xi_virtual,
        seed,
    };
    spec.validate()?;
    Ok(spec)
}
