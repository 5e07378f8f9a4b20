//! Standard wavelength bands.

use serde::{Deserialize, Serialize};

use crate::error::{AnalysisError, Result};

/// A wavelength band `[λ_min, λ_max]` (m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavelengthBand {
    pub name: String,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

impl WavelengthBand {
    /// Creates and validates a band.
    pub fn new(name: impl Into<String>, lambda_min: f64, lambda_max: f64) -> Result<Self> {
        let band = Self {
            name: name.into(),
            lambda_min,
            lambda_max,
        };
        band.validate()?;
        Ok(band)
    }

    /// Full range of interest, 3–200 m.
    pub fn whole() -> Self {
        Self::fixed("whole", 3.0, 200.0)
    }

    /// Short wavelengths, 3–25 m.
    pub fn d1() -> Self {
        Self::fixed("D1", 3.0, 25.0)
    }

    /// Medium wavelengths, 25–70 m.
    pub fn d2() -> Self {
        Self::fixed("D2", 25.0, 70.0)
    }

    /// Long wavelengths, 70–200 m.
    pub fn d3() -> Self {
        Self::fixed("D3", 70.0, 200.0)
    }

    fn fixed(name: &str, lo: f64, hi: f64) -> Self {
        Self {
            name: name.to_string(),
            lambda_min: lo,
            lambda_max: hi,
        }
    }

    /// `0 < λ_min < λ_max`, both finite.
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_min > 0.0 && self.lambda_min < self.lambda_max && self.lambda_max.is_finite()) {
            return Err(AnalysisError::Config(format!(
                "band '{}' must satisfy 0 < lambda_min < lambda_max, got [{}, {}]",
                self.name, self.lambda_min, self.lambda_max
            )));
        }
        Ok(())
    }

    /// Checks that the band is resolvable at sampling interval `ds`.
    pub fn check_nyquist(&self, ds: f64) -> Result<()> {
        self.validate()?;
        if !(ds > 0.0) {
            return Err(AnalysisError::Config(format!("sampling interval must be positive, got {ds}")));
        }
        if self.lambda_min < 2.0 * ds {
            return Err(AnalysisError::Config(format!(
                "Nyquist violation for band '{}': lambda_min = {} m < 2·ds = {} m",
                self.name,
                self.lambda_min,
                2.0 * ds
            )));
        }
        Ok(())
    }
}

/// The whole range followed by D1, D2, D3.
pub fn standard_bands() -> Vec<WavelengthBand> {
    vec![
        WavelengthBand::whole(),
        WavelengthBand::d1(),
        WavelengthBand::d2(),
        WavelengthBand::d3(),
    ]
}
