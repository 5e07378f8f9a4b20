//! Digital Butterworth band-pass design (second-order sections) and
//! zero-phase forward-backward filtering.
//!
//! The design follows the classical route: analog low-pass prototype →
//! low-pass-to-band-pass transform → bilinear transform with frequency
//! prewarping → second-order sections. Forward-backward filtering pads the
//! signal with an odd reflection and starts each pass from the steady state
//! of a step, which suppresses edge transients.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::bands::WavelengthBand;
use crate::error::{AnalysisError, Result};

/// Order of the low-pass prototype; the band-pass has twice as many poles.
pub const BUTTERWORTH_ORDER: usize = 4;

/// One biquad `b0 + b1 z⁻¹ + b2 z⁻² / (1 + a1 z⁻¹ + a2 z⁻²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section {
    pub b: [f64; 3],
    pub a: [f64; 3],
}

/// Cascade of biquads.
#[derive(Debug, Clone, PartialEq)]
pub struct Sos {
    pub sections: Vec<Section>,
}

/// Designs an `order`-th order Butterworth band-pass with cut-offs `f_lo`,
/// `f_hi` at sampling rate `fs` (any consistent frequency unit).
pub fn butter_bandpass(order: usize, f_lo: f64, f_hi: f64, fs: f64) -> Result<Sos> {
    if order == 0 {
        return Err(AnalysisError::Config("filter order must be positive".into()));
    }
    if !(f_lo > 0.0 && f_lo < f_hi && f_hi < fs / 2.0) {
        return Err(AnalysisError::Config(format!(
            "band-pass edges must satisfy 0 < {f_lo} < {f_hi} < fs/2 = {}",
            fs / 2.0
        )));
    }
    // Normalised to Nyquist, prewarped for a bilinear transform at rate 2.
    let warp = |f: f64| 4.0 * (PI * (f / (fs / 2.0)) / 2.0).tan();
    let (w1, w2) = (warp(f_lo), warp(f_hi));
    let bw = w2 - w1;
    let wo = (w1 * w2).sqrt();

    // Analog Butterworth prototype poles on the unit circle.
    let n = order as i64;
    let proto: Vec<Complex64> = (0..n)
        .map(|i| {
            let m = (-n + 1 + 2 * i) as f64;
            -Complex64::from_polar(1.0, PI * m / (2.0 * order as f64))
        })
        .collect();

    // Low-pass to band-pass: each pole splits into two; `order` zeros at 0.
    let mut analog = Vec::with_capacity(2 * order);
    for p in &proto {
        let p_lp = p * (bw / 2.0);
        let disc = (p_lp * p_lp - wo * wo).sqrt();
        analog.push(p_lp + disc);
        analog.push(p_lp - disc);
    }
    let k_analog = bw.powi(order as i32);

    // Bilinear transform at rate 2 (fs2 = 4).
    let fs2 = 4.0;
    let digital: Vec<Complex64> = analog.iter().map(|p| (fs2 + p) / (fs2 - p)).collect();
    // Zeros: `order` analog zeros at 0 map to +1; the degree deficit maps to −1.
    let num = Complex64::new(fs2, 0.0).powi(order as i32);
    let den: Complex64 = analog.iter().map(|p| fs2 - p).product();
    let k_digital = k_analog * (num / den).re;

    // Pair conjugate poles; sections ordered by pole radius, poles closest
    // to the unit circle last. Working from the last section backwards,
    // each pole pair takes the two remaining zeros nearest to it.
    let mut upper: Vec<Complex64> = digital.into_iter().filter(|p| p.im > 0.0).collect();
    if upper.len() != order {
        return Err(AnalysisError::Config(format!(
            "band-pass design produced {} complex pole pairs, expected {order}",
            upper.len()
        )));
    }
    upper.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let mut zeros: Vec<f64> = [1.0, -1.0].iter().flat_map(|&z| std::iter::repeat_n(z, order)).collect();
    let mut sections = vec![
        Section {
            b: [0.0; 3],
            a: [0.0; 3]
        };
        order
    ];
    for (i, p) in upper.iter().enumerate().rev() {
        let mut pick = || {
            let (j, _) = zeros
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| (p - *a).norm().total_cmp(&(p - *b).norm()))
                .expect("two zeros per section");
            zeros.swap_remove(j)
        };
        let (z1, z2) = (pick(), pick());
        let g = if i == 0 { k_digital } else { 1.0 };
        sections[i] = Section {
            b: [g, -g * (z1 + z2), g * z1 * z2],
            a: [1.0, -2.0 * p.re, p.norm_sqr()],
        };
    }
    Ok(Sos { sections })
}

/// Designs the standard band-pass for a wavelength band at spatial sampling
/// interval `ds` (m): cut-offs `1/λ_max` and `1/λ_min` cycles/m.
pub fn band_filter(band: &WavelengthBand, ds: f64) -> Result<Sos> {
    band.check_nyquist(ds)?;
    let fs = 1.0 / ds;
    let f_hi = 1.0 / band.lambda_min;
    if f_hi >= fs / 2.0 {
        return Err(AnalysisError::Config(format!(
            "band '{}' upper edge lies at the Nyquist frequency for ds = {ds} m",
            band.name
        )));
    }
    butter_bandpass(BUTTERWORTH_ORDER, 1.0 / band.lambda_max, f_hi, fs)
}

impl Sos {
    /// Complex frequency response at normalised angular frequency `w`
    /// (rad/sample).
    pub fn response(&self, w: f64) -> Complex64 {
        let z1 = Complex64::from_polar(1.0, -w);
        let z2 = z1 * z1;
        self.sections
            .iter()
            .map(|s| (s.b[0] + z1 * s.b[1] + z2 * s.b[2]) / (s.a[0] + z1 * s.a[1] + z2 * s.a[2]))
            .product()
    }

    /// Steady-state initial conditions of each section for a unit step
    /// input, scaled by the DC gain of the preceding sections.
    pub fn step_initial_conditions(&self) -> Vec<[f64; 2]> {
        let mut scale = 1.0;
        self.sections
            .iter()
            .map(|s| {
                let zi = section_step_state(s);
                let out = [zi[0] * scale, zi[1] * scale];
                scale *= (s.b[0] + s.b[1] + s.b[2]) / (s.a[0] + s.a[1] + s.a[2]);
                out
            })
            .collect()
    }

    /// Causal filtering in transposed direct form II with initial states.
    pub fn filter_with_state(&self, x: &[f64], zi: &[[f64; 2]]) -> Vec<f64> {
        let mut y = x.to_vec();
        for (s, z0) in self.sections.iter().zip(zi) {
            let [b0, b1, b2] = s.b;
            let [_, a1, a2] = s.a;
            let (mut z1, mut z2) = (z0[0], z0[1]);
            for v in y.iter_mut() {
                let input = *v;
                let out = b0 * input + z1;
                z1 = b1 * input - a1 * out + z2;
                z2 = b2 * input - a2 * out;
                *v = out;
            }
        }
        y
    }

    /// Causal filtering from rest.
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        self.filter_with_state(x, &vec![[0.0, 0.0]; self.sections.len()])
    }

    /// Edge padding length used by [`Sos::filtfilt`].
    pub fn pad_len(&self) -> usize {
        let zero_b2 = self.sections.iter().filter(|s| s.b[2] == 0.0).count();
        let zero_a2 = self.sections.iter().filter(|s| s.a[2] == 0.0).count();
        3 * (2 * self.sections.len() + 1 - zero_b2.min(zero_a2))
    }

    /// Zero-phase forward-backward filtering with odd-reflection padding.
    pub fn filtfilt(&self, x: &[f64]) -> Result<Vec<f64>> {
        let pad = self.pad_len();
        let n = x.len();
        if n <= pad {
            return Err(AnalysisError::Config(format!(
                "signal of {n} samples is too short for zero-phase filtering (needs > {pad})"
            )));
        }
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));

        let zi = self.step_initial_conditions();
        let scaled = |v: f64| zi.iter().map(|z| [z[0] * v, z[1] * v]).collect::<Vec<_>>();
        let forward = self.filter_with_state(&ext, &scaled(ext[0]));
        let mut rev: Vec<f64> = forward.into_iter().rev().collect();
        rev = self.filter_with_state(&rev, &scaled(rev[0]));
        rev.reverse();
        Ok(rev[pad..pad + n].to_vec())
    }
}

/// State of one biquad after an infinitely long unit step.
fn section_step_state(s: &Section) -> [f64; 2] {
    // Solve (I − Aᵀ) z = b[1..] − a[1..]·b0 for the companion form.
    let [b0, b1, b2] = s.b;
    let [_, a1, a2] = s.a;
    let rhs = [b1 - a1 * b0, b2 - a2 * b0];
    // I − Aᵀ = [[1 + a1, −1], [a2, 1]]
    let m = [[1.0 + a1, -1.0], [a2, 1.0]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [
        (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ]
}

/// Zero-phase band-pass of `signal` sampled every `ds` metres.
pub fn bandpass(signal: &[f64], ds: f64, band: &WavelengthBand) -> Result<Vec<f64>> {
    band_filter(band, ds)?.filtfilt(signal)
}
