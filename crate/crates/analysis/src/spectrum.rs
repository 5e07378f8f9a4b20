//! Single-sided amplitude spectrum over spatial frequency.

use rustfft::{num_complex::Complex64, FftPlanner};

use crate::error::{AnalysisError, Result};

/// Minimum signal length accepted by [`spectrum`].
pub const MIN_SPECTRUM_LEN: usize = 16;

/// Single-sided amplitude spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Spatial frequency of each bin (cycles/m).
    pub freq: Vec<f64>,
    /// Amplitude of each bin (m): a sinusoid of amplitude `A` at a bin
    /// frequency shows magnitude `A`.
    pub magnitude: Vec<f64>,
    /// Number of input samples.
    pub n: usize,
}

impl Spectrum {
    /// Mean square of the signal reconstructed from the magnitudes
    /// (Parseval): DC and Nyquist bins count fully, the others by half.
    pub fn mean_square(&self) -> f64 {
        let last = self.magnitude.len() - 1;
        self.magnitude
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let full = k == 0 || (self.n % 2 == 0 && k == last);
                if full {
                    m * m
                } else {
                    0.5 * m * m
                }
            })
            .sum()
    }

    /// Index of the largest non-DC bin.
    pub fn peak_bin(&self) -> usize {
        (1..self.magnitude.len())
            .max_by(|&a, &b| self.magnitude[a].total_cmp(&self.magnitude[b]))
            .unwrap_or(0)
    }
}

/// FFT amplitude spectrum of `signal` sampled every `ds` metres.
pub fn spectrum(signal: &[f64], ds: f64) -> Result<Spectrum> {
    let n = signal.len();
    if n < MIN_SPECTRUM_LEN {
        return Err(AnalysisError::Config(format!(
            "spectrum needs at least {MIN_SPECTRUM_LEN} samples, got {n}"
        )));
    }
    if !(ds > 0.0) {
        return Err(AnalysisError::Config(format!("sampling interval must be positive, got {ds}")));
    }
    let mut buf: Vec<Complex64> = signal.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let bins = n / 2 + 1;
    let nf = n as f64;
    let magnitude = (0..bins)
        .map(|k| {
            let full = k == 0 || (n % 2 == 0 && k == n / 2);
            buf[k].norm() / nf * if full { 1.0 } else { 2.0 }
        })
        .collect();
    let freq = (0..bins).map(|k| k as f64 / (nf * ds)).collect();
    Ok(Spectrum { freq, magnitude, n })
}
